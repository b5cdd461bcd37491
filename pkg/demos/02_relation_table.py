"""
Quadratic relations from theta coefficients
===========================================

For n generators the relation space has dimension n(n-1)/2 at a generic
shift.  At eta = 1/n one of the coefficient products vanishes.
"""
from skewtor.theta import SingularCoefficient, SklyaninParams, sklyanin_relations

for n in (3, 4, 5):
    table = sklyanin_relations(SklyaninParams(n, 1.1j, 0.13 + 0.07j))
    print(n, "generators:", len(table.entries), "relations, rank", table.rank)

table = sklyanin_relations(SklyaninParams(3, 1j, 0.2 + 0.1j))
for i, j in table.independent_basis:
    print("  (%d, %d):" % (i, j), table.entries[(i, j)])

try:
    sklyanin_relations(SklyaninParams(4, 2j))
except SingularCoefficient as exc:
    print("eta = 1/4:", exc)
