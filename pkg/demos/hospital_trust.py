"""Two doctors, two patients: what can we learn about whom to trust?

Run with ``python3 demos/hospital_trust.py``.
"""

from expertrev import ReportSequence, make_operator, parse_expertise_formula
from expertrev.propositional import Signature

sig = Signature(["x", "y"], ["c1", "c2"], ["*", "a", "b"])
seq = ReportSequence.of(sig, [
    ("*", "c1", "x"),   # a lab test settles x for patient 1
    ("a", "c2", "x"),
    ("b", "c2", "!x"),
    ("a", "c1", "!x"),  # doctor a contradicts the lab
])

for name in ("weak-mb", "var-based-cond", "part-based-cond", "excess-min"):
    out = make_operator(name, sig)(seq)
    print(f"{name}: {out.possible_count} possible, {out.plausible_count} plausible worlds")
    for text in ("E(a, x)", "E(b, x)", "x"):
        f = parse_expertise_formula(text, sig)
        known = out.holds("c2", f, "possible") or out.holds("c2", parse_expertise_formula(f"!({text})", sig), "possible")
        print(f"  c2: {text:8} believed={out.holds('c2', f)!s:5}  decided by knowledge={known}")
    print(f"  beliefs about patient 2: {out.prop_models('c2').labels(sig)}")
