"""Verification suites with machine-readable reports.

Each suite is a list of timed checks.  A check records a human-readable
description, a short anchor slug naming the fact being exercised, a
pass/fail status, and the exact residual when something fails (vectors are
serialized as label -> "p/q" maps, ranks as plain ints).  Reports round-trip
through JSON, and two runs with the same config and seed produce identical
reports apart from the timing fields.
"""

import itertools
import random
import time
from dataclasses import asdict, dataclass

from .algebra import (
    AFFINE_SL2,
    ALGEBRAS,
    C,
    EXTENDED_SL2,
    alphabet_symbols,
    bracket,
    bracket_vec,
    sigma,
    sigma_vec,
    spectral_flow,
    spectral_flow_vec,
    sym,
)
from .exact import (
    Q,
    QONE,
    RowSpace,
    format_rational,
    parse_rational,
    vec_eq,
    vec_iadd,
    vec_scale,
)
from .freefield import (
    WakimotoModule,
    critical_match_report,
    cyclic_identity_report,
    twisted_whittaker_check,
)
from .lattice import PiModule, compare_realization, d_semisimple_report
from .quadratic import L_mode, Laurent, T_mode, virasoro_residual
from .whittaker import (
    BorelVirModule,
    CriticalQuotient,
    TruncationBox,
    UniversalWhittaker,
    box_labels,
    sugawara_basis_vector,
    whittaker_vector_solver,
)

COEFFICIENT_POOL = list(range(-3, 4))


@dataclass
class CheckRecord:
    description: str
    anchor: str
    status: str
    residual: object = None
    seconds: float = 0.0


@dataclass
class RunConfig:
    suite: str = "all"
    params: dict | None = None
    box: tuple = (4, 4)
    mode_bound: int = 3
    seed: int = 0
    out: str | None = None
    pretty: bool = False

    def truncation_box(self):
        return TruncationBox(self.box[0], self.box[1])


@dataclass
class Report:
    suite: str
    seed: int
    coefficient_pool: list
    checks: list
    ok: bool

    def to_dict(self):
        return asdict(self)


def report_from_dict(data):
    checks = [CheckRecord(**c) for c in data["checks"]]
    return Report(
        suite=data["suite"],
        seed=data["seed"],
        coefficient_pool=list(data["coefficient_pool"]),
        checks=checks,
        ok=data["ok"],
    )


def _json_safe(value):
    """Residuals reach the report as JSON-native data so that failing
    reports round-trip exactly like passing ones."""
    if isinstance(value, (list, tuple)):
        return [_json_safe(item) for item in value]
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (str, int, bool)) or value is None:
        return value
    return str(value)


def _record(description, anchor, ok, residual, started):
    return CheckRecord(
        description=description,
        anchor=anchor,
        status="pass" if ok else "fail",
        residual=None if ok else _json_safe(residual),
        seconds=round(time.perf_counter() - started, 3),
    )


def _vec_json(v):
    return {str(lbl): format_rational(c) for lbl, c in sorted(v.items(), key=str)}


# ---------------------------------------------------------------------------
# module construction from config parameters


def _rat(value):
    if isinstance(value, str):
        return parse_rational(value)
    return Q(value)


def _laurent(data, convention):
    if data.get("convention") != convention:
        raise ValueError(
            f"series must use the {convention} convention, got {data.get('convention')!r}"
        )
    coeffs = {int(k): parse_rational(str(v)) for k, v in data["coeffs"].items()}
    return Laurent(convention, coeffs)


def module_from_params(params):
    """Build a module handle from a plain config mapping.

    The "module" key selects the kind; rationals are "p/q" strings or ints,
    Laurent data carries an explicit convention tag.
    """
    kind = params.get("module")
    if kind == "universal":
        return UniversalWhittaker(
            _rat(params["lam"]), _rat(params["mu"]), _rat(params["kappa"])
        )
    if kind == "critical":
        return CriticalQuotient(
            _rat(params["lam"]),
            _rat(params["mu"]),
            _laurent(params["c_series"], "weight2"),
        )
    if kind == "borel_vir":
        return BorelVirModule(
            _rat(params["lam"]),
            _rat(params["mu"]),
            _rat(params["kappa1"]),
            _rat(params["kappa"]),
        )
    if kind == "wakimoto":
        return WakimotoModule(
            _rat(params["lam"]),
            _rat(params["mu"]),
            _rat(params["kappa"]),
            _laurent(params["chi"], "weight1"),
            variant=params.get("variant", "tensor"),
        )
    if kind == "pi":
        return PiModule(_rat(params["lam"]), _laurent(params["chi"], "weight2"))
    raise ValueError(f"unknown module kind {kind!r}")


# ---------------------------------------------------------------------------
# commutator machinery shared by several suites


def _commutator_defect(handle, x, y, v):
    lhs = handle.act(x, handle.act(y, v))
    vec_iadd(lhs, handle.act(y, handle.act(x, v)), -QONE)
    for s, c in bracket(AFFINE_SL2, x, y).items():
        if s == C:
            vec_iadd(lhs, v, -c * handle.level)
        else:
            vec_iadd(lhs, handle.act(s, v), -c)
    return lhs


def _representation_check(handle, name, box, mode_bound):
    started = time.perf_counter()
    labels = _handle_box_labels(handle, box)
    gens = [sym(f, n) for f in "efh" for n in range(-mode_bound, mode_bound + 1)]
    bad = []
    for x, y in itertools.combinations_with_replacement(gens, 2):
        for lbl in labels:
            defect = _commutator_defect(handle, x, y, {lbl: QONE})
            if defect:
                bad.append({"pair": [str(x), str(y)], "label": str(lbl),
                            "residual": _vec_json(defect)})
    desc = (
        f"{name}: generator commutators with |mode| <= {mode_bound} match the "
        f"bracket table on {len(labels)} box({box.max_weight},{box.max_length}) vectors"
    )
    return _record(desc, "representation-property", not bad, bad[:3], started)


def _handle_box_labels(handle, box):
    if hasattr(handle, "box_labels"):
        return handle.box_labels(box)
    return box_labels(handle, box)


# ---------------------------------------------------------------------------
# suites


def suite_brackets(config, rng):
    """Antisymmetry and the Jacobi identity over every table."""
    checks = []
    for alg in ALGEBRAS:
        started = time.perf_counter()
        symbols = alphabet_symbols(alg, 4)
        cache = {}

        def br(x, y):
            hit = cache.get((x, y))
            if hit is None:
                hit = bracket(alg, x, y)
                cache[(x, y)] = hit
            return hit

        bad = []
        for x in symbols:
            for y in symbols:
                lhs = br(x, y)
                if lhs != vec_scale(br(y, x), -QONE):
                    bad.append({"kind": "antisymmetry", "pair": [str(x), str(y)]})
        for x in symbols:
            for y in symbols:
                bxy = br(x, y)
                for z in symbols:
                    total = {}
                    for s, c in br(y, z).items():
                        vec_iadd(total, br(x, s), c)
                    for s, c in br(z, x).items():
                        vec_iadd(total, br(y, s), c)
                    for s, c in bxy.items():
                        vec_iadd(total, br(z, s), c)
                    if total:
                        bad.append(
                            {"kind": "jacobi", "triple": [str(x), str(y), str(z)]}
                        )
        desc = f"{alg}: antisymmetry and Jacobi over all triples with |mode| <= 4"
        checks.append(_record(desc, "bracket-tables", not bad, bad[:3], started))
    return checks


_REPRESENTATION_DEFAULTS = (
    ("V(2,3,1)", lambda: UniversalWhittaker(2, 3, 1)),
    ("V(2,3,-1/2)", lambda: UniversalWhittaker(2, 3, Q(-1, 2))),
    ("V(2,0,1)", lambda: UniversalWhittaker(2, 0, 1)),
    ("V(0,3,1)", lambda: UniversalWhittaker(0, 3, 1)),
    (
        "critical quotient (2,3) with series 1/z^2 + 2/z^3",
        lambda: CriticalQuotient(2, 3, Laurent("weight2", {0: Q(1), -1: Q(2)})),
    ),
    (
        "Weyl/Heisenberg realization (2,3) at level 1, tails (5,7)",
        lambda: WakimotoModule(2, 3, 1, {0: Q(5), 1: Q(7)}),
    ),
    (
        "lattice realization, lam=2, series 1/z^2 with f(1) value 1",
        lambda: PiModule(2, {1: Q(2), 0: Q(1)}),
    ),
)


def suite_representation(config, rng):
    """Pairwise generator commutators against the bracket table."""
    box = config.truncation_box()
    if config.params:
        handle = module_from_params(config.params)
        name = config.params.get("module")
        return [_representation_check(handle, name, box, config.mode_bound)]
    return [
        _representation_check(build(), name, box, config.mode_bound)
        for name, build in _REPRESENTATION_DEFAULTS
    ]


def suite_sugawara(config, rng):
    """Quadratic Virasoro modes: commutation with the loop generators, the
    Virasoro relation with central charge 3k/(k+2), and the logged value of
    L(1) on the cyclic vector."""
    box = config.truncation_box()
    small = TruncationBox(min(box.max_weight, 2), min(box.max_length, 2))
    if config.params:
        handles = [module_from_params(config.params)]
    else:
        handles = [UniversalWhittaker(2, 3, k) for k in (Q(1), Q(-1, 2), Q(7))]
    checks = []
    for V in handles:
        kap = V.level
        tag = f"kappa={format_rational(kap)}"

        started = time.perf_counter()
        labels = _handle_box_labels(V, box)
        gens = [sym(f, m) for f in "efh" for m in range(-2, 3)]
        bad = []
        for n in range(-2, 3):
            for g in gens:
                for lbl in labels:
                    v = {lbl: QONE}
                    lhs = L_mode(n, V, V.act(g, v))
                    vec_iadd(lhs, V.act(g, L_mode(n, V, v)), -QONE)
                    vec_iadd(lhs, V.act(sym(g[0], n + g[1]), v), Q(g[1]))
                    if lhs:
                        bad.append({"n": n, "generator": str(g), "label": str(lbl)})
        desc = (
            f"{tag}: [L(n), x(m)] = -m x(n+m) for n in [-2,2], |m| <= 2 on "
            f"{len(labels)} box vectors"
        )
        checks.append(_record(desc, "energy-commutators", not bad, bad[:3], started))

        started = time.perf_counter()
        bad = []
        for n in range(-2, 3):
            for m in range(-2, 3):
                for lbl in _handle_box_labels(V, small):
                    if virasoro_residual(n, m, V, {lbl: QONE}):
                        bad.append({"n": n, "m": m, "label": str(lbl)})
        for n, m in ((2, -2), (-2, 2), (1, -1), (0, 0)):
            for lbl in labels:
                if virasoro_residual(n, m, V, {lbl: QONE}):
                    bad.append({"n": n, "m": m, "label": str(lbl)})
        desc = (
            f"{tag}: Virasoro relation with central charge 3k/(k+2) = "
            f"{format_rational(3 * kap / (kap + 2))}, exhaustive small modes plus "
            f"the charge-revealing pairs on the full box"
        )
        checks.append(_record(desc, "virasoro-relation", not bad, bad[:3], started))

        started = time.perf_counter()
        got = L_mode(1, V, V.cyclic())
        want = vec_scale(V.cyclic(), V.lam * V.mu / (kap + 2))
        desc = (
            f"{tag}: L(1) acts on the cyclic vector by lam*mu/(kappa+2) = "
            f"{format_rational(V.lam * V.mu / (kap + 2))}"
        )
        checks.append(
            _record(desc, "energy-eigenvalue", vec_eq(got, want), _vec_json(got), started)
        )
    return checks


def suite_critical_center(config, rng):
    """At level -2 the quadratic modes commute with the whole action and
    read off lam*mu at mode 1."""
    box = TruncationBox(3, 3)
    if config.params:
        handles = [module_from_params(config.params)]
    else:
        handles = [UniversalWhittaker(*lm, Q(-2)) for lm in ((2, 3), (1, 0), (5, -1))]
    checks = []
    for V in handles:
        tag = f"(lam,mu)=({format_rational(V.lam)},{format_rational(V.mu)})"
        started = time.perf_counter()
        labels = _handle_box_labels(V, box)
        gens = [sym(f, m) for f in "efh" for m in range(-2, 3)]
        bad = []
        for n in range(-2, 3):
            for g in gens:
                for lbl in labels:
                    v = {lbl: QONE}
                    lhs = T_mode(n, V, V.act(g, v))
                    vec_iadd(lhs, V.act(g, T_mode(n, V, v)), -QONE)
                    if lhs:
                        bad.append({"n": n, "generator": str(g), "label": str(lbl)})
        desc = f"{tag}: [T(n), x(m)] = 0 for n, m in [-2,2] on {len(labels)} box vectors"
        checks.append(_record(desc, "central-commutant", not bad, bad[:3], started))

        started = time.perf_counter()
        got = T_mode(1, V, V.cyclic())
        want = vec_scale(V.cyclic(), V.lam * V.mu)
        desc = f"{tag}: T(1) acts on the cyclic vector by lam*mu = " + format_rational(
            V.lam * V.mu
        )
        checks.append(
            _record(desc, "central-eigenvalue", vec_eq(got, want), _vec_json(got), started)
        )
    return checks


def suite_eigenvalues(config, rng):
    """The five eigen-identities of the realized cyclic vector, sampled."""
    checks = []
    for _ in range(20):
        lam, mu, chi0, chi1, kap = (rng.choice(COEFFICIENT_POOL) for _ in range(5))
        started = time.perf_counter()
        handle = WakimotoModule(lam, mu, kap, {0: Q(chi0), 1: Q(chi1)})
        rep = cyclic_identity_report(handle)
        f2 = Q(mu) * (Q(chi1) - Q(lam) * Q(mu))
        desc = (
            f"eigen-identities at (lam,mu,chi0,chi1,kappa)="
            f"({lam},{mu},{chi0},{chi1},{kap}); f(2) acts by {format_rational(f2)}"
        )
        checks.append(
            _record(desc, "eigenvalue-list", rep["ok"], rep["mismatches"], started)
        )
    return checks


def suite_plain_vector(config, rng):
    """mu = 0, chi_1 = 0: f(1) kills the cyclic vector and L(0) acts by
    chi_0 (chi_0 + 2) / (4 (kappa + 2))."""
    checks = []
    drawn = 0
    while drawn < 10:
        lam, chi0, kap = (rng.choice(COEFFICIENT_POOL) for _ in range(3))
        if kap == -2:
            continue
        drawn += 1
        started = time.perf_counter()
        handle = WakimotoModule(lam, 0, kap, {0: Q(chi0)})
        v = handle.cyclic()
        f1 = handle.act(sym("f", 1), v)
        want = Q(chi0) * (Q(chi0) + 2) / (4 * (Q(kap) + 2))
        l0 = L_mode(0, handle, v)
        vec_iadd(l0, v, -want)
        ok = not f1 and not l0
        desc = (
            f"plain vector at (lam,chi0,kappa)=({lam},{chi0},{kap}): f(1) v = 0 "
            f"and L(0) v = {format_rational(want)} v"
        )
        residual = {"f1": _vec_json(f1), "l0_defect": _vec_json(l0)}
        checks.append(_record(desc, "plain-vector", ok, residual, started))
    return checks


def suite_basis(config, rng):
    """Quadratic-mode basis vectors over box(3,3): independence and the
    leading coefficient (lam/(kappa+2))^{|k|}."""
    if config.params:
        V = module_from_params(config.params)
    else:
        V = UniversalWhittaker(2, 3, 1)
    box = TruncationBox(3, 3)
    started = time.perf_counter()
    labels = box_labels(V, box)
    space = RowSpace()
    bad = []
    for lbl in labels:
        i, j, k = V.ijk_of_label(lbl)
        u = sugawara_basis_vector(V, i, j, k)
        lead = (V.lam / (V.level + 2)) ** sum(k.values())
        if u.get(lbl) != lead:
            bad.append({"label": str(lbl), "kind": "leading-coefficient"})
        if not space.add_row(u):
            bad.append({"label": str(lbl), "kind": "dependence"})
    desc = (
        f"{len(labels)} basis vectors over box(3,3) are independent with "
        f"leading coefficients (lam/(kappa+2))^|k|"
    )
    ok = not bad and space.rank == len(labels)
    return [_record(desc, "basis-certificate", ok, bad[:5], started)]


def suite_kernels(config, rng):
    """Kernel dimensions of the eigenvalue-shifted generators."""
    box = config.truncation_box()
    checks = []

    started = time.perf_counter()
    V = UniversalWhittaker(2, 3, 1)
    kernel = whittaker_vector_solver(V, Q(2), Q(3), box)
    desc = f"V(2,3,1): box kernel dimension {len(kernel)} = 1"
    checks.append(
        _record(desc, "kernel-dimension", len(kernel) == 1, {"dim": len(kernel)}, started)
    )

    started = time.perf_counter()
    Vc = CriticalQuotient(2, 3, Laurent("weight2", {0: Q(1), -1: Q(2)}))
    kernel = whittaker_vector_solver(Vc, Q(2), Q(3), box)
    desc = f"critical quotient (2,3), series 1/z^2 + 2/z^3: box kernel dimension {len(kernel)} = 1"
    checks.append(
        _record(desc, "kernel-dimension", len(kernel) == 1, {"dim": len(kernel)}, started)
    )

    started = time.perf_counter()
    V2 = UniversalWhittaker(2, 3, -2)
    labels = set(box_labels(V2, box))
    monomials = 0
    for r in range(0, box.max_length + 1):
        for ks in itertools.combinations_with_replacement(
            range(0, box.max_weight + 1), r
        ):
            v = V2.cyclic()
            for k in ks:
                v = T_mode(-k, V2, v)
            if v and all(lbl in labels for lbl in v):
                monomials += 1
    kernel = whittaker_vector_solver(V2, Q(2), Q(3), box)
    desc = (
        f"universal level -2: box kernel dimension {len(kernel)} equals the "
        f"count {monomials} of central monomials inside the box"
    )
    checks.append(
        _record(
            desc,
            "kernel-dimension",
            len(kernel) == monomials,
            {"dim": len(kernel), "monomials": monomials},
            started,
        )
    )
    return checks


def suite_cross_realization(config, rng):
    """Lattice-side realization against the critical quotient."""
    box = config.truncation_box()
    if box.max_weight > 3 or box.max_length > 3:
        box = TruncationBox(3, 3)
    if config.params and config.params.get("module") == "pi":
        handle = module_from_params(config.params)
        lam, chi = handle.lam, handle.chi
    else:
        lam, chi = Q(2), {1: Q(2), 0: Q(1)}
    started = time.perf_counter()
    rep = compare_realization(lam, chi, box, mode_bound=config.mode_bound)
    checks = [
        _record(
            f"mapped quotient words stay independent over box({box.max_weight},{box.max_length})",
            "cross-realization",
            rep["independent"],
            {"words": rep["words"]},
            started,
        ),
        _record(
            f"action matrices of the two constructions coincide for {rep['generators']} generators",
            "cross-realization",
            not rep["mismatches"],
            rep["mismatches"][:3],
            started,
        ),
        _record(
            "measured central series matches the declared character",
            "cross-realization",
            rep["character_check"],
            None,
            started,
        ),
    ]
    return checks


def suite_critical_match(config, rng):
    """Level -2 realization against the quotient with the matching series.

    The series fed to the quotient is half of the naive squared-character
    formula; the measured eigenvalues force the half, see the check text.
    """
    box = config.truncation_box()
    started = time.perf_counter()
    rep = critical_match_report(2, 0, {0: Q(1), -1: Q(2)}, box, config.mode_bound)
    desc = (
        f"level -2 realization (lam=2, tail 1/z + 2/z^2) matches the quotient with "
        f"series {rep['series']} (convention: {rep['series_convention']}) on "
        f"{rep['words']} words, |mode| <= {config.mode_bound}"
    )
    return [
        _record(desc, "critical-match", rep["ok"], rep["mismatches"][:3], started)
    ]


def suite_grading(config, rng):
    """d := -L(0) acts semisimply on the lattice realization exactly when
    the character is concentrated at mode 0."""
    box = TruncationBox(2, 2)
    cases = [
        ({0: Q(5)}, True),
        ({0: Q(5), -1: Q(1)}, False),
        ({0: Q(5), 1: Q(2)}, False),
    ]
    checks = []
    for chi, graded in cases:
        started = time.perf_counter()
        rep = d_semisimple_report(PiModule(1, chi), box)
        shape = {int(m): format_rational(v) for m, v in chi.items()}
        if graded:
            desc = f"character {shape}: [d, x(n)] = n x(n) holds on every box vector"
            ok = rep["ok"] and rep["chi_graded"] and not rep["residuals"]
        else:
            desc = f"character {shape}: the grading relation shows a nonzero residual"
            ok = rep["ok"] and not rep["chi_graded"] and bool(rep["residuals"])
        checks.append(
            _record(desc, "semisimple-grading", ok, rep["residuals"][:3], started)
        )
    return checks


def suite_automorphisms(config, rng):
    """Bracket preservation for the order-reversal twist and the mode
    shifts, plus the twisted eigen-list realized by pre-composition."""
    checks = []

    started = time.perf_counter()
    symbols = alphabet_symbols(EXTENDED_SL2, 3)
    bad = []
    for x, y in itertools.product(symbols, repeat=2):
        lhs = sigma_vec(bracket(EXTENDED_SL2, x, y))
        rhs = bracket_vec(EXTENDED_SL2, sigma(x), sigma(y))
        if lhs != rhs:
            bad.append({"pair": [str(x), str(y)]})
    desc = "order-reversal twist preserves the extended bracket, |mode| <= 3"
    checks.append(_record(desc, "twist-homomorphism", not bad, bad[:3], started))

    for s in range(-3, 4):
        started = time.perf_counter()
        symbols = alphabet_symbols(AFFINE_SL2, 3)
        bad = []
        for x, y in itertools.product(symbols, repeat=2):
            lhs = spectral_flow_vec(s, bracket(AFFINE_SL2, x, y))
            rhs = bracket_vec(AFFINE_SL2, spectral_flow(s, x), spectral_flow(s, y))
            if lhs != rhs:
                bad.append({"pair": [str(x), str(y)]})
        desc = f"mode shift s={s} preserves the bracket, |mode| <= 3"
        checks.append(_record(desc, "shift-homomorphism", not bad, bad[:3], started))

    handle = WakimotoModule(2, 1, -2, {0: Q(1), 1: Q(2), 2: Q(3)}, variant="onedim")
    for s in range(-3, 4):
        started = time.perf_counter()
        rep = twisted_whittaker_check(handle, s)
        desc = f"twisted eigen-list under the mode shift s={s}"
        checks.append(
            _record(desc, "twisted-module", rep["ok"], rep["mismatches"], started)
        )
    return checks


SUITES = {
    "brackets": suite_brackets,
    "representation": suite_representation,
    "sugawara": suite_sugawara,
    "critical-center": suite_critical_center,
    "eigenvalues": suite_eigenvalues,
    "plain-vector": suite_plain_vector,
    "basis": suite_basis,
    "kernels": suite_kernels,
    "cross-realization": suite_cross_realization,
    "critical-match": suite_critical_match,
    "grading": suite_grading,
    "automorphisms": suite_automorphisms,
}


def run_suites(config):
    """Run the selected suite (or all of them) and assemble the report."""
    if config.suite != "all" and config.suite not in SUITES:
        raise ValueError(
            f"unknown suite {config.suite!r}; choose from {', '.join(SUITES)} or all"
        )
    names = list(SUITES) if config.suite == "all" else [config.suite]
    rng = random.Random(config.seed)
    checks = []
    for name in names:
        checks.extend(SUITES[name](config, rng))
    return Report(
        suite=config.suite,
        seed=config.seed,
        coefficient_pool=COEFFICIENT_POOL,
        checks=checks,
        ok=all(c.status == "pass" for c in checks),
    )
