#!/usr/bin/env python3
"""Solve emitted LP files with scipy's MILP solver.

    lp_crosscheck.py FILE.lp...          print "<file> <objective>" per file
    lp_crosscheck.py --eonctl PATH DIR   generate tiny instances with eonctl,
                                         solve them both ways and compare

Exits 77 (skip) when scipy.optimize.milp is unavailable.
"""

import json
import os
import re
import subprocess
import sys

SKIP = 77

try:
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import lil_matrix
except ImportError:  # pragma: no cover
    print("scipy with milp not available; skipping")
    sys.exit(SKIP)

TERM = re.compile(r"([+-])?\s*(\d+(?:\.\d+)?)?\s*([A-Za-z_][A-Za-z0-9_]*)")


def parse_expr(text):
    """Linear expression -> {var: coef}."""
    out = {}
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError("bad expression near %r" % text[pos:pos + 30])
        sign = -1.0 if m.group(1) == "-" else 1.0
        coef = float(m.group(2)) if m.group(2) else 1.0
        out[m.group(3)] = out.get(m.group(3), 0.0) + sign * coef
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def parse_lp(text):
    sections = {"obj": [], "st": [], "bin": [], "bounds": []}
    current = None
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low in ("minimize", "min"):
            current = "obj"
        elif low in ("subject to", "st", "s.t."):
            current = "st"
        elif low == "bounds":
            current = "bounds"
        elif low in ("binary", "binaries", "bin"):
            current = "bin"
        elif low == "end":
            current = None
        elif current is None:
            raise ValueError("text outside a section: %r" % line)
        else:
            sections[current].append(line)

    obj_text = " ".join(sections["obj"])
    obj_text = obj_text.split(":", 1)[1] if ":" in obj_text else obj_text
    objective = parse_expr(obj_text)

    rows = []
    blob = " ".join(sections["st"])
    for m in re.finditer(r"([A-Za-z_][A-Za-z0-9_]*):(.*?)(<=|>=|=)\s*(-?\d+(?:\.\d+)?)", blob):
        rows.append((m.group(1), parse_expr(m.group(2)), m.group(3), float(m.group(4))))
    binaries = " ".join(sections["bin"]).split()
    return objective, rows, binaries


def solve_lp(text):
    objective, rows, binaries = parse_lp(text)
    names = sorted(set(binaries) | set(objective) | {v for _, e, _, _ in rows for v in e})
    index = {v: i for i, v in enumerate(names)}
    c = np.zeros(len(names))
    for v, a in objective.items():
        c[index[v]] = a
    A = lil_matrix((len(rows), len(names)))
    lo = np.empty(len(rows))
    hi = np.empty(len(rows))
    for r, (_, expr, op, rhs) in enumerate(rows):
        for v, a in expr.items():
            A[r, index[v]] = a
        lo[r] = rhs if op in ("=", ">=") else -np.inf
        hi[r] = rhs if op in ("=", "<=") else np.inf
    res = milp(c, constraints=LinearConstraint(A.tocsr(), lo, hi),
               integrality=np.ones(len(names)), bounds=Bounds(0, 1))
    if res.status != 0:
        return None
    return int(round(res.fun))


def self_check(eonctl, workdir):
    os.makedirs(workdir, exist_ok=True)
    cases = [(1, 1, 2, 5), (2, 2, 2, 6), (3, 1, 3, 7), (4, 1, 4, 8), (5, 1, 3, 9)]
    failures = 0
    for n, lo, hi, seed in cases:
        base = os.path.join(workdir, "lp_%d" % seed)
        subprocess.run([eonctl, "gen", "--topology", "six_node", "--demands", str(n),
                        "--slices", "%d:%d" % (lo, hi), "--seed", str(seed), "-o", base + ".csv"],
                       check=True, stdout=subprocess.DEVNULL)
        with open(base + ".csv") as f:
            slots = sum(int(line.split(",")[3]) for line in f.read().splitlines()[1:])
        subprocess.run([eonctl, "emit-lp", "--topology", "six_node", "--traffic", base + ".csv",
                        "--slots", str(slots), "-o", base + ".lp"], check=True)
        out = subprocess.run([eonctl, "solve", "--topology", "six_node", "--traffic", base + ".csv",
                              "--method", "exact", "--slots", str(slots), "--json"],
                             check=True, capture_output=True, text=True).stdout
        expected = json.loads(out)["objective"]
        with open(base + ".lp") as f:
            got = solve_lp(f.read())
        status = "ok" if got == expected else "MISMATCH"
        failures += got != expected
        print("%s: milp %s, branch and bound %s %s" % (os.path.basename(base), got, expected, status))
    return 1 if failures else 0


def main(argv):
    if len(argv) >= 3 and argv[0] == "--eonctl":
        return self_check(argv[1], argv[2])
    if not argv:
        print(__doc__)
        return 2
    for path in argv:
        with open(path) as f:
            value = solve_lp(f.read())
        print("%s %s" % (path, "infeasible" if value is None else value))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
