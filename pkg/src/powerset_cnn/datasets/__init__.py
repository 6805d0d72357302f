from .base import (DatasetFormatError, LabeledDataset, load_dataset, random_split,
                   save_dataset)
from .hypergraph import (DOM4_CORPORA, DOM_CORPORA, CorpusParseError, CorruptCorpusError,
                         Hypergraph, MissingCorpusError, assoc_setfn, build_coauth10,
                         build_con10, build_dom, corpus_paths, cut_setfn, indicator_setfn,
                         induced_subhypergraph, is_contained, is_open, load_corpus, load_named,
                         open_extensions, two_section)
from .synthetic import (GenerationError, absorb_singletons, gen_coverage, gen_kjunta,
                        gen_spectral_patterns, gen_submod, is_kjunta, is_submodular,
                        pattern_supports, perturb_coverage, random_kjunta, relevant_elements)

__all__ = [
    "CorpusParseError", "CorruptCorpusError", "DOM4_CORPORA", "DOM_CORPORA",
    "DatasetFormatError", "GenerationError", "Hypergraph", "LabeledDataset",
    "MissingCorpusError", "absorb_singletons", "assoc_setfn", "build_coauth10", "build_con10",
    "build_dom", "corpus_paths", "cut_setfn", "gen_coverage", "gen_kjunta",
    "gen_spectral_patterns", "gen_submod", "indicator_setfn", "induced_subhypergraph",
    "is_contained", "is_kjunta", "is_open", "is_submodular", "load_corpus", "load_dataset",
    "load_named", "open_extensions", "pattern_supports", "perturb_coverage", "random_kjunta",
    "random_split", "relevant_elements", "save_dataset", "two_section",
]
