# The central pipeline: deform the trace a_p -> a'_p while certifying that
# the module only moves by p^m.  One passing run, one refused run.
import json

from wachdeform import (
    BoundViolated,
    PadicElt,
    PadicParams,
    deform_trace,
    seed_companion,
)

params = PadicParams(p=3, e=1, prec_pi=37)
w = seed_companion(params, k=2, a_p=PadicElt.from_int(params, 3),
                   chi_gamma=2, nx=32)

# v(30 - 3) = 3 meets the hypothesis 2 v(a_p) + alpha(k-1) + m = 3
wp, cert = deform_trace(w, PadicElt.from_int(params, 30), m=1)
print(f"deformed a_p: 3 -> 30 at level m=1")
print(f"  bound: v(eps) = {cert.bound_observed} >= {cert.bound_required}")
print(f"  P' == P mod p^m: {cert.p_congruent}")
print(f"  G' == G mod p^m: {cert.g_congruent}")
print(f"  char poly of P'(0) is T^2 - 30 T + 3: {cert.charpoly_ok}")
print(f"  deformed module passes all axioms: {cert.axioms_ok}")
print(f"  H coefficient valuations {cert.h_valuations} over floors {cert.h_floors}")
print(f"  gamma-correction orders solved: {[j for j, _ in cert.iteration_log[:6]]} ...")
print("certificate verdict:", "PASS" if cert.ok else "FAIL")

# the full certificate is plain data, ready for files or pipelines
print("\nas JSON:")
print(json.dumps(cert.as_obj(), indent=1, sort_keys=True)[:400], "...")

# below the bound the engine refuses before touching any matrix
try:
    deform_trace(w, PadicElt.from_int(params, 12), m=1)   # v(9) = 2 < 3
except BoundViolated as exc:
    print("\na'_p = 12 refused:", exc)
