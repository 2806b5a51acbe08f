# %% [markdown]
# # Effective rank of a MIMO channel
#
# The effective rank is the exponential of the Shannon entropy of the
# normalized singular values. It runs continuously from 1 (one usable
# spatial mode) to the number of non-zero singular values (all modes
# equally strong).

# %%
import numpy as np

from risrank import effective_rank, rank_report, svd

print(effective_rank([1, 1, 1]))  # 3.0
print(effective_rank([5, 0, 0]))  # 1.0
print(effective_rank([2, 1, 1]))  # 2**1.5

# %% [markdown]
# A rank-one channel plus a little scatter: the algebraic rank is 3, the
# effective rank stays close to 1.

# %%
rng = np.random.default_rng(0)
a, b = np.exp(2j * np.pi * rng.random(3)), np.exp(2j * np.pi * rng.random(3))
h = np.outer(a, b) + 0.1 * (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))) / np.sqrt(2)
rep = rank_report(h)
print("singular values", np.round(rep.singular_values, 4))
print("effective rank ", round(rep.effective_rank, 4))
print("condition no.  ", round(rep.condition_number, 2))

# %% [markdown]
# The SVD is a one-sided Jacobi iteration; it reconstructs the input to
# machine precision.

# %%
r = svd(h)
print(np.max(np.abs(r.reconstruct() - h)))
