"""Prints the reference values frozen into the C++ unit tests."""
import math
from scipy import stats
from model import *

bw = load('../../data/bw33.csv')
print('bw33 path_z(17) =', repr(path_z(bw, 17)))
print('bw33 |Z|(17) =', repr(math.hypot(*path_z(bw, 17))))
print('bw33 scc(17) =', repr(scc(bw, 17)))
print('bw33 subtree(2) =', subtree(bw, 2))
print('bw33 subtree(5) =', subtree(bw, 5))
empty = (0,) * 33
sizes = [s for s, _ in TABLE]
bl = branch_losses_kw(bw, empty, sizes)
print('bw33 total loss empty kW =', repr(sum(bl.values())))
print('bw33 subtree loss(5) kW =', repr(sum(bl[b] for b in subtree(bw, 5))))
print('bw33 empty cost @100 =', repr(cost(bw, empty, TABLE, 100)))

two = dict(vnom=12.66, parent={0: None, 1: 0}, r={1: 0.1}, x={1: 0.05}, p={0: 0, 1: 100}, q={0: 0, 1: 60}, n=2)
print('2bus loss kW =', repr(sum(branch_losses_kw(two, (0, 0), sizes).values())))
print('2bus loss kW cap1 =', repr(sum(branch_losses_kw(two, (0, 1), sizes).values())))
print('2bus eq5 kW cap1 =', repr(0.1 * (100**2 + 60**2 - 150**2) / 12.66**2 / 1000))
print('2bus cost cap1 @100 =', repr(cost(two, (0, 1), TABLE, 100)))
print('amort factor =', repr(amort_factor()))
print('amort type1 =', repr(1498 * amort_factor()))
print('amort type6 x0.8 =', repr(0.8 * 2955 * amort_factor()))

syn = load('../../data/syn7.csv')
tab = [TABLE[1], TABLE[3]]
print('syn7 constrained opt @100 =', enumerate_opt(syn, tab, 100, True))
print('syn7 unconstrained opt @100 =', enumerate_opt(syn, tab, 100, False))

a = [2.1, 2.5, 2.3, 2.2]
b = [2.0, 2.4, 2.6, 2.2]
print('welch p =', repr(stats.ttest_ind(a, b, equal_var=False).pvalue))
a2 = [1, 2, 3, 4, 5]
print('welch p shifted =', repr(stats.ttest_ind(a2, [v + 100 for v in a2], equal_var=False).pvalue))
print('welch p mixed =', repr(stats.ttest_ind([10, 12, 9, 11, 13, 10], [8, 9, 7, 10], equal_var=False).pvalue))
print('chi2 crit df9 0.001 =', repr(stats.chi2.isf(0.001, 9)))
print('exp pmf n2 mu0.5 =', repr(math.exp(-0.5) / (math.exp(-0.5) + math.exp(-1))))
