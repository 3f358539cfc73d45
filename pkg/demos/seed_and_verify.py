# Build companion-form module data for a weight/trace pair, re-verify its
# axioms from scratch, and round-trip it through the on-disk format.
import tempfile
from pathlib import Path

from wachdeform import (
    PadicElt,
    PadicParams,
    SeedSingular,
    check_axioms,
    load_wach,
    save_wach,
    seed_companion,
)

params = PadicParams(p=3, e=1, prec_pi=24)
w = seed_companion(params, k=2, a_p=PadicElt.from_int(params, 3),
                   chi_gamma=2, nx=32)
print(f"seeded: p=3, k=2, a_p=3, chi(gamma)=2, x-precision {w.P.nx}")

rep = check_axioms(w)
print("commutation defect valuation:", rep.commutation_defect_val,
      "at cap", rep.commutation_defect_cap)
print("axioms:", "all pass" if rep.ok else "FAIL")

# the gamma-matrix G is solved order by order; its first coefficients
print("G(0) =", [w.G.eval0().a.lift_int(), w.G.eval0().b.lift_int(),
                 w.G.eval0().c.lift_int(), w.G.eval0().d.lift_int()])

with tempfile.TemporaryDirectory() as d:
    path = Path(d) / "weight2.json"
    save_wach(w, path)
    again = load_wach(path)
    print("round trip:", "ok" if check_axioms(again).ok else "FAIL",
          f"({path.stat().st_size} bytes on disk)")

# not every (k, a_p) admits this shape: the gamma-matrix is UNIQUE over the
# fraction field, and for many weights it falls outside the integral ring.
# The seeder reports the failing order instead of guessing.
try:
    seed_companion(params, k=4, a_p=PadicElt.from_int(params, 3), chi_gamma=2)
except SeedSingular as exc:
    print("k=4, a_p=3 refused:", exc)
