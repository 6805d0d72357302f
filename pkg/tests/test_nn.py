import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from powerset_cnn.core import SetFunction, ShiftModel, shift_indices
from powerset_cnn.filtering import convolve_direct
from powerset_cnn.nn import (MODEL_TAGS, Accumulate, Adam, Dense, Flatten, ModelConfig,
                             PowersetPool, ReLU, SpectralConv, build_model, canonical_tag,
                             load_checkpoint, lr_schedule, save_checkpoint,
                             softmax_cross_entropy)
from powerset_cnn.nn.gradcheck import check_layer, check_loss, check_model


def hypercube_adjacency(s):
    """(A s)_B = sum over x of s_{B xor {x}}, along axis 0."""
    size = s.shape[0]
    n = size.bit_length() - 1
    idx = np.arange(size)
    return sum(s[idx ^ (1 << i)] for i in range(n))


def conv64(n, ci, co, kind="pcn", model=None, rng=None, **kw):
    return SpectralConv(n, ci, co, kind, model, rng=rng, dtype=np.float64, **kw)


def signal(rng, n, batch, ch):
    return rng.standard_normal((1 << n, batch, ch))


class TestConvExamples:
    def test_identity_bank(self, model, rng):
        layer = conv64(3, 2, 2, model=model, rng=rng)
        W = np.zeros_like(layer.params["weight"])
        W[0, 0, 0] = W[1, 1, 0] = 1.0
        layer.params["weight"][...] = W
        x = np.abs(signal(rng, 3, 4, 2))
        np.testing.assert_allclose(layer.forward(x), x, atol=1e-12)

    def test_single_channel_example(self):
        layer = conv64(2, 1, 1, rng=np.random.default_rng(0))
        layer.params["weight"][...] = np.array([1.0, 1.0, 0.0]).reshape(1, 1, 3)
        x = np.array([1.0, 2, 3, 4]).reshape(4, 1, 1)
        np.testing.assert_allclose(layer.forward(x).ravel(), [2, 3, 6, 7], atol=1e-12)

    def test_zero_filters_give_relu_bias(self, rng):
        layer = conv64(3, 2, 3, rng=rng)
        layer.params["weight"][...] = 0
        layer.params["bias"][...] = [-1.0, 0.5, 2.0]
        out = layer.forward(signal(rng, 3, 5, 2))
        np.testing.assert_allclose(out, np.broadcast_to([0.0, 0.5, 2.0], out.shape), atol=1e-12)

    @pytest.mark.parametrize("model", [ShiftModel.ABSORB, ShiftModel.UNION])
    def test_matches_direct_convolution(self, model, rng):
        n, ci, co = 4, 2, 3
        layer = conv64(n, ci, co, model=model, rng=rng, activation=False)
        layer.params["bias"][...] = rng.standard_normal(co)
        x = signal(rng, n, 2, ci)
        out = layer.forward(x)
        for b in range(2):
            for j in range(co):
                ref = sum(convolve_direct(layer.filter_coefficients(i, j),
                                          SetFunction.from_values(x[:, b, i]), model).values
                          for i in range(ci))
                np.testing.assert_allclose(out[:, b, j], ref + layer.params["bias"][j],
                                           atol=1e-10)

    def test_weight_shapes_and_param_count(self):
        layer = SpectralConv(10, 1, 32, rng=np.random.default_rng(0))
        assert layer.params["weight"].shape == (1, 32, 11)
        assert layer.n_params() == 384
        for n, ci, co in [(3, 2, 5), (10, 32, 32), (7, 4, 1)]:
            layer = SpectralConv(n, ci, co, rng=np.random.default_rng(0))
            assert layer.n_params() == co + ci * co * (n + 1)


class TestGraphLayers:
    def test_adjacency_example(self):
        s = np.array([1.0, 2, 3, 4])
        np.testing.assert_array_equal(hypercube_adjacency(s), [5, 5, 5, 5])
        layer = conv64(2, 1, 1, "a_gcn", rng=np.random.default_rng(0), activation=False)
        layer.params["weight"][...] = np.array([0.0, 1.0]).reshape(1, 1, 2)
        np.testing.assert_allclose(layer.forward(s.reshape(4, 1, 1)).ravel(), [5, 5, 5, 5],
                                   atol=1e-12)

    def test_a_gcn_identity(self, rng):
        layer = conv64(3, 1, 1, "a_gcn", rng=rng)
        layer.params["weight"][...] = np.array([1.0, 0.0]).reshape(1, 1, 2)
        x = np.abs(signal(rng, 3, 2, 1))
        np.testing.assert_allclose(layer.forward(x), x, atol=1e-12)

    def test_a_gcn_formula(self, rng):
        n, ci, co = 4, 3, 2
        layer = conv64(n, ci, co, "a_gcn", rng=rng, activation=False)
        x = signal(rng, n, 2, ci)
        W = layer.params["weight"]
        ref = np.einsum("sbi,ij->sbj", x, W[:, :, 0]) + \
            np.einsum("sbi,ij->sbj", hypercube_adjacency(x), W[:, :, 1])
        np.testing.assert_allclose(layer.forward(x), ref, atol=1e-10)

    def test_a_gcn_is_tied_symdiff_conv(self, rng):
        n = 4
        gcn = conv64(n, 1, 1, "a_gcn", rng=rng, activation=False)
        theta0, theta1 = gcn.params["weight"].ravel()
        pcn = conv64(n, 1, 1, "pcn", ShiftModel.SYMDIFF, rng=rng, activation=False)
        pcn.params["weight"][...] = np.array([theta0] + [theta1] * n).reshape(1, 1, n + 1)
        x = signal(rng, n, 3, 1)
        np.testing.assert_allclose(gcn.forward(x), pcn.forward(x), atol=1e-10)

    def test_l_gcn_formula(self, rng):
        n, ci, co = 5, 2, 3
        layer = conv64(n, ci, co, "l_gcn", rng=rng, activation=False)
        x = signal(rng, n, 2, ci)
        # 2I - L with L = I - A/n
        op = x + hypercube_adjacency(x) / n
        ref = np.einsum("sbi,ij->sbj", op, layer.params["weight"][:, :, 0])
        np.testing.assert_allclose(layer.forward(x), ref, atol=1e-10)
        assert layer.n_params() == co + ci * co


class TestEquivariance:
    @pytest.mark.parametrize("kind,model", [("pcn", ShiftModel.ABSORB), ("pcn", ShiftModel.UNION),
                                            ("pcn", ShiftModel.SYMDIFF),
                                            ("a_gcn", ShiftModel.SYMDIFF),
                                            ("l_gcn", ShiftModel.SYMDIFF)])
    def test_pre_activation_commutes_with_shifts(self, kind, model, rng):
        n = 4
        layer = conv64(n, 2, 3, kind, model if kind == "pcn" else None, rng=rng,
                       activation=False)
        x = signal(rng, n, 2, 2)
        for Q in range(1 << n):
            idx = shift_indices(n, Q, model)
            np.testing.assert_allclose(layer.forward(x[idx]), layer.forward(x)[idx], atol=1e-10)


class TestPoolingAndAccumulate:
    def test_pool_shape(self, rng):
        pool = PowersetPool(10)
        assert pool.forward(rng.standard_normal((1024, 2, 32))).shape == (512, 2, 32)

    def test_pool_selects_values(self, rng):
        x = rng.standard_normal((16, 3, 4))
        out = PowersetPool(4).forward(x)
        assert np.isin(out, x).all()
        perm = rng.permutation(4)
        np.testing.assert_array_equal(PowersetPool(4).forward(x[:, :, perm]), out[:, :, perm])

    def test_pool_needs_two_elements(self):
        with pytest.raises(ValueError):
            PowersetPool(1)

    def test_accumulate_examples(self):
        acc = Accumulate()
        np.testing.assert_allclose(acc.forward(np.array([1.0, 3.0]).reshape(2, 1, 1)), [[2.0]])
        np.testing.assert_allclose(acc.forward(np.full((8, 2, 3), 1.5)), np.full((2, 3), 1.5))

    def test_accumulate_symdiff_invariant(self, rng):
        x = rng.standard_normal((16, 2, 3))
        for Q in range(16):
            idx = shift_indices(4, Q, ShiftModel.SYMDIFF)
            np.testing.assert_allclose(Accumulate().forward(x[idx]), Accumulate().forward(x))


class TestGradients:
    TOL = 1e-6

    @pytest.mark.parametrize("kind,model", [("pcn", ShiftModel.ABSORB), ("pcn", ShiftModel.UNION),
                                            ("pcn", ShiftModel.SYMDIFF), ("a_gcn", None),
                                            ("l_gcn", None)])
    def test_conv_layers(self, kind, model, rng):
        layer = conv64(4, 2, 3, kind, model, rng=rng)
        layer.params["bias"][...] = rng.standard_normal(3) * 0.1
        errors = check_layer(layer, signal(rng, 4, 2, 2), rng)
        assert max(errors.values()) < self.TOL, errors

    def test_conv_n5(self, rng):
        errors = check_layer(conv64(5, 1, 2, rng=rng), signal(rng, 5, 1, 1), rng)
        assert max(errors.values()) < self.TOL, errors

    @pytest.mark.parametrize("make", [lambda rng: PowersetPool(4), lambda rng: Accumulate(),
                                      lambda rng: Flatten(), lambda rng: ReLU()],
                             ids=["pool", "accumulate", "flatten", "relu"])
    def test_shape_layers(self, make, rng):
        x = signal(rng, 4, 2, 3)
        errors = check_layer(make(rng), x, rng)
        assert max(errors.values()) < self.TOL, errors

    def test_dense(self, rng):
        layer = Dense(6, 4, rng, np.float64)
        errors = check_layer(layer, rng.standard_normal((3, 6)), rng)
        assert max(errors.values()) < self.TOL, errors

    def test_softmax_cross_entropy(self, rng):
        logits = rng.standard_normal((5, 4))
        labels = rng.integers(0, 4, 5)
        assert check_loss(softmax_cross_entropy, logits, labels) < self.TOL

    @pytest.mark.parametrize("tag", ["*-PCN pool", "◇-PCN pool avg", "A-GCN", "L-GCN pool"])
    def test_small_models(self, tag, rng):
        cfg = ModelConfig(tag, 3, width=3, hidden=5)
        model = build_model(cfg, 4, rng=rng, dtype=np.float64)
        # zero biases leave dead units sitting exactly on the ReLU kink
        for name, p, _ in model.named_parameters():
            if name.endswith("bias"):
                p[...] = rng.uniform(0.05, 0.2, p.shape)
        X = rng.standard_normal((4, 16))
        labels = rng.integers(0, 3, 4)
        errors = check_model(model, X, labels, softmax_cross_entropy, max_entries=12, rng=rng)
        assert max(errors.values()) < self.TOL, errors

    def test_zero_upstream_and_linearity(self, rng):
        layer = conv64(3, 2, 2, rng=rng, activation=False)
        x = signal(rng, 3, 2, 2)
        layer.forward(x)
        layer.zero_grad()
        dx = layer.backward(np.zeros((8, 2, 2)))
        assert not dx.any() and not layer.grads["weight"].any()
        g = rng.standard_normal((8, 2, 2))
        layer.zero_grad()
        dx1 = layer.backward(g)
        w1 = layer.grads["weight"].copy()
        layer.zero_grad()
        dx2 = layer.backward(2 * g)
        np.testing.assert_allclose(dx2, 2 * dx1)
        np.testing.assert_allclose(layer.grads["weight"], 2 * w1)

    def test_backward_before_forward(self, rng):
        with pytest.raises(RuntimeError):
            conv64(3, 1, 1, rng=rng).backward(np.zeros((8, 1, 1)))


class TestLoss:
    @given(st.integers(2, 12), st.floats(-50, 50))
    def test_uniform_logits(self, k, value):
        loss, _ = softmax_cross_entropy(np.full((3, k), value), np.zeros(3, dtype=int))
        assert math.isclose(loss, math.log(k), rel_tol=1e-12)

    def test_confident_logits(self):
        loss, _ = softmax_cross_entropy(np.array([[1000.0, 0.0]]), np.array([0]))
        assert loss < 1e-12

    def test_label_range(self):
        with pytest.raises(ValueError):
            softmax_cross_entropy(np.zeros((2, 3)), np.array([0, 3]))
        with pytest.raises(ValueError):
            softmax_cross_entropy(np.zeros((2, 3)), np.array([0]))


class TestAdam:
    def test_schedule(self):
        assert lr_schedule(0) == pytest.approx(0.001)
        assert lr_schedule(1) == pytest.approx(0.00095)
        assert lr_schedule(10) == pytest.approx(0.001 * 0.95 ** 10)

    def test_zero_gradient(self, rng):
        p = rng.standard_normal(10)
        before = p.copy()
        opt = Adam()
        for _ in range(3):
            opt.step([("p", p, np.zeros(10))])
        np.testing.assert_array_equal(p, before)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.floats(-1e3, 1e3).filter(lambda v: abs(v) > 1e-3), min_size=1,
                    max_size=8))
    def test_first_step_is_sign(self, g):
        g = np.array(g)
        p = np.zeros_like(g)
        Adam(lr=1e-3).step([("p", p, g)])
        np.testing.assert_allclose(p, -1e-3 * np.sign(g), rtol=1e-4)

    def test_state_mismatch(self):
        opt = Adam()
        opt.step([("p", np.zeros(3), np.ones(3))])
        with pytest.raises(ValueError):
            opt.step([("p", np.zeros(4), np.ones(4))])


class TestModels:
    def test_zoo_tags(self):
        assert len(MODEL_TAGS) == 13
        for tag in MODEL_TAGS:
            assert canonical_tag(tag) == tag
        assert canonical_tag("diamond-pcn pool avg.") == "◇-PCN pool avg"
        assert canonical_tag("a-gcn_pool") == "A-GCN pool"
        for bad in ["CNN", "MLP pool", "*-PCN avg", "*-PCN pool max"]:
            with pytest.raises(ValueError):
                canonical_tag(bad)

    def test_head_sizes(self):
        rng = np.random.default_rng(0)
        assert build_model("*-PCN pool", 10, 4, rng=rng).head_input_size() == 4096
        assert build_model("*-PCN pool avg", 10, 4, rng=rng).head_input_size() == 32
        assert build_model("A-GCN", 10, 4, rng=rng).head_input_size() == 32768
        mlp = build_model("MLP", 10, 4, rng=rng)
        shapes = [layer.params["weight"].shape for layer in mlp.layers if isinstance(layer, Dense)]
        assert shapes == [(1024, 4096), (4096, 4096), (4096, 4)]

    @pytest.mark.parametrize("tag", MODEL_TAGS)
    def test_every_tag_runs(self, tag, rng):
        cfg = ModelConfig(tag, 3, width=4, hidden=8, mlp_hidden=16)
        model = build_model(cfg, 5, rng=rng)
        X = rng.standard_normal((6, 32))
        logits = model.forward(X)
        assert logits.shape == (6, 3) and logits.dtype == np.float32
        _, d = softmax_cross_entropy(logits, rng.integers(0, 3, 6))
        model.backward(d)
        assert model.predict(X).shape == (6,)

    def test_input_size_checked(self, rng):
        model = build_model("*-PCN", 4, 2, rng=rng)
        with pytest.raises(ValueError):
            model.forward(np.zeros((2, 8)))

    def test_loss_decreases_on_fixed_batch(self):
        rng = np.random.default_rng(1)
        n, k = 6, 2
        centers = rng.standard_normal((k, 1 << n)) * 2
        labels = np.repeat(np.arange(k), 16)
        X = centers[labels] + 0.3 * rng.standard_normal((len(labels), 1 << n))
        model = build_model(ModelConfig("*-PCN", k, width=8, hidden=32), n, rng=rng)
        opt = Adam()
        params = list(model.named_parameters())
        losses = []
        for _ in range(11):
            model.zero_grad()
            loss, d = softmax_cross_entropy(model.forward(X), labels)
            model.backward(d)
            opt.step(params)
            losses.append(loss)
        assert sum(b < a for a, b in zip(losses, losses[1:])) >= 8

    def test_checkpoint_round_trip(self, tmp_path, rng):
        cfg = ModelConfig("*-PCN pool", 3, width=4, hidden=8)
        a = build_model(cfg, 5, rng=np.random.default_rng(1))
        b = build_model(cfg, 5, rng=np.random.default_rng(2))
        save_checkpoint(a, tmp_path / "m.npz")
        load_checkpoint(b, tmp_path / "m.npz")
        X = rng.standard_normal((3, 32))
        np.testing.assert_array_equal(a.forward(X), b.forward(X))
        other = build_model(ModelConfig("A-GCN", 3, width=4, hidden=8), 5, rng=rng)
        with pytest.raises(ValueError):
            load_checkpoint(other, tmp_path / "m.npz")
