"""
Turning link attacks into sensing attacks
=========================================

Blocking links splits a fully connected team into subgroups. The largest
subgroup the attacker can be forced to leave intact decides how many
robots are effectively lost.
"""

from robust_tracking import caa

# a team of five robots has ten links
N = 5
print("alpha_c  n_max  alpha_cs")
for alpha_c in range(N * (N - 1) // 2 + 1):
    r = caa(N, alpha_c)
    print(f"{alpha_c:7d}  {r.n_max:5d}  {r.alpha_cs:8d}")

# the table of most links kept when no subgroup exceeds n robots
print("ebar:", caa(N, 0).ebar)

# a larger team: 29 of 45 links blocked leaves two groups of five
print(caa(10, 29))
