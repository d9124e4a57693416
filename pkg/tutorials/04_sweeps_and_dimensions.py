"""
Cross-checking the two criteria and counting dimensions
=======================================================
"""

# %%
import collections

from kdiff.dimension import dimension_report
from kdiff.generate import exhaustive_instances, random_instances, sweep

summary = sweep(exhaustive_instances(3, 3, (2, 3)))
print(summary.to_json())

# %%
# Seeded random instances also vary power divisors and pole orders.
summary = sweep(random_instances(300, seed=1, ks=(2, 3, 4, 6)))
print(summary.instances, summary.disagreements, summary.holds, summary.fails)

# %%
# Range of expected dimensions over a random family, per k.
dims = collections.defaultdict(list)
for t in random_instances(200, seed=2, ks=(1, 2, 3)):
    dims[t.k].append(dimension_report(t).twisted_dim)
for k, values in sorted(dims.items()):
    print(f"k={k}: {len(values)} instances, dimension {min(values)}..{max(values)}")
