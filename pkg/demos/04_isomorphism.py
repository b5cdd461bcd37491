"""
Torus versus the skew quadratic algebra
=======================================

Compare the quotient of the four-generator algebra by uu* = vv* = mu^-1 e
with the expanded torus relations, first at mu = 1 and then with mu formal.
"""
from skewtor import presentations as pres
from skewtor.presentations import compare

q4 = pres.q4_mod_imu()
torus = pres.torus_expanded()

print("mu = 1:", compare(torus, q4.specialize_mu()).equivalent)

# with mu formal the quotient collapses, the unit reduces to zero
formal = compare(torus.rescale_unit(), q4)
print("formal mu:", formal.equivalent, "quotient trivial:", formal.system_b.is_trivial)

report = pres.theorem1_check()
print()
print("\n".join(report.lines()))
