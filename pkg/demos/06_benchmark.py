"""Transform cost roughly doubles with each extra ground set element."""
from powerset_cnn.core import ShiftModel
from powerset_cnn.harness import bench_transforms, doubling_ok
from powerset_cnn.harness.bench import format_table

rows = bench_transforms(range(12, 21), list(ShiftModel), repeats=5)
print(format_table(rows))
print("doubling holds for n=14..19:", doubling_ok(rows))
