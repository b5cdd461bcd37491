"""
Deriving the mixed torus relations by rewriting
===============================================

Start from vu = q uv plus the unit relations, complete the system, and
reduce the mixed commutation relations to zero with a replayable trace.
"""
from skewtor import presentations as pres
from skewtor.algebra import parse_polynomial
from skewtor.rewriting import count_normal_words, derives

source = pres.torus_relations()
for rel in source.relations:
    print(rel)

target = parse_polynomial("u v* - q v* u")
ok, trace = derives(source.relations, target, pres.DEFAULT_ORDER, star_close=True)
print("\nderivable:", ok)
print("\n".join(trace.lines()))
print("replay agrees:", trace.replay() == trace.end)

rs = pres.rule_system(source)
print("\ncompleted system:")
for rule in rs.rules:
    print("  ", rule)
print("normal words by degree:", [count_normal_words(rs, d) for d in range(9)])
