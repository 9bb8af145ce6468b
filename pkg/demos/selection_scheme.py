"""Beliefs as per-report weakenings: each report is relaxed to a selected set of valuations."""

from expertrev import ReportSequence
from expertrev.postulates import extract_selection_scheme
from expertrev.propositional import Signature

sig = Signature(["p", "q"], ["c"], ["*", "i"])
sigma = ReportSequence.of(sig, [("*", "c", "p"), ("i", "c", "!p & q")])
for op in ("weak-mb", "var-based-cond", "excess-min"):
    scheme = extract_selection_scheme(op, sigma)
    print(op)
    for row in scheme.to_dict()["selection"]:
        print(f"  {row['source']} reported {row['report']} -> kept {row['selected']}")
    print(f"  conjunction gives {scheme.reconstruct('c').labels(sig)}")
