"""Search a small space of report sequences for postulate violations.

Every counterexample found is replayed from its JSON witness.
"""

import json

from expertrev.postulates import SequenceSpace, check_postulate, replay
from expertrev.propositional import Signature

sig = Signature(["p"], ["c", "d"], ["*", "i", "j"])
space = SequenceSpace(sig, 2)
print(f"{len(space)} sequences of length at most 2")

for op in ("var-based-cond", "excess-min"):
    for name in ("Duplicate-removal", "Inclusion-vacuity", "Acyc(2)"):
        rep = check_postulate(op, name, space)
        print(f"{op:15} {name:18} {rep.status} after {rep.instances} instances")
        if not rep.holds:
            print("  witness:", json.dumps(rep.witness["instance"], ensure_ascii=False))
            print("  replays:", replay(rep, op, sig))
