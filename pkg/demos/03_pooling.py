"""Pooling shrinks the ground set by merging elements."""
import numpy as np

from powerset_cnn.core import GroundSet, SetFunction
from powerset_cnn.filtering import pool_combine, pool_max_element
from powerset_cnn.nn import PowersetPool

g = GroundSet(3, labels=("x", "y", "z"))
s = SetFunction(g, np.arange(8, dtype=float))

# merging x and y keeps the subsets that hold both or neither of them
merged = pool_combine(s, g.subset(["x", "y"]))
print("after merging x,y:", merged.ground.labels, merged.values)

# a max over "with z" and "without z" is the other way to drop an element
print("max-pool away z:", pool_max_element(s, "z").values)

# the network layer merges x_1 and x_2 for a whole batch; layout is (subsets, batch, channels)
layer = PowersetPool(3)
X = np.arange(32, dtype=float).reshape(8, 2, 2)
print("batched layer:", X.shape, "->", layer.forward(X).shape)
