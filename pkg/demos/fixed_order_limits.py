"""A repeated report that a fixed plausibility order cannot turn into belief.

Two sources report different valuations for case c and the reliable source
confirms one of the two happened.  Then the first source repeats itself in
case d.  Conditioning on a fixed order cannot take that as a reason to believe
it; excess-min can.
"""

from expertrev.postulates import check_success_variants, impossibility_construction
from expertrev.propositional import Signature

sig = Signature(["p"], ["c", "d"], ["*", "i", "j"])
sigma, report = impossibility_construction(sig)
print("sequence:", sigma)
print("then:    ", report)
for op in ("var-based-cond", "part-based-cond", "excess-min"):
    cond, strong = check_success_variants(op, sigma, report)
    print(f"{op:15} Cond-success {cond.status:15} Strong-cond-success {strong.status}")
