"""Batch front door: structured input documents in, reports out.

One JSON object per input file, tagged by "kind":

* galois-datum: {"kind": "galois-datum", "r": 2, "M": 4,
                 "generators": [{"perm": [1, 0], "unit": 3}]}
* involution-lattice: {"kind": "involution-lattice", "matrix": [[0,1],[1,0]]}
* split-extension: {"kind": "split-extension",
                    "pi": {"cyclic": 2} | {"symmetric": 3} | {"klein": true}
                         | {"table": [[...]]},
                    "action": [one integer matrix per group element],
                    "coefficients": {"mu": 2, "chi": [1, 1]}
                                  | {"rank": k, "modulus": n or null,
                                     "matrices": [...]}}

Exit codes: 0 success, 2 malformed input, 3 invariant violation,
4 oracle disagreement.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from . import __version__
from .brauer import (
    brute_invariants,
    representative_independence,
    symbol_basis,
    verify_basis,
)
from .errors import (
    DisagreementError,
    SchemaError,
    TorusBrauerError,
    ValidationError,
)
from .groups import (
    CoeffModule,
    FiniteGroup,
    GaloisDatum,
    GLattice,
    invariants_finite,
)
from .intlat import IntMatrix
from .spectral import (
    SplitExtensionSpec,
    pushforward_formula_check,
    d2_02,
    lattice_cohomology,
    real_torus_check,
    v2,
)

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_VALIDATION = 3
EXIT_DISAGREEMENT = 4


# ---------------------------------------------------------------------------
# input documents
# ---------------------------------------------------------------------------


def load_document(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise SchemaError(f"cannot read input: {e}") from e
    except json.JSONDecodeError as e:
        raise SchemaError(f"input is not valid JSON: {e}") from e
    if not isinstance(doc, dict) or "kind" not in doc:
        raise SchemaError('input must be a JSON object with a "kind" tag')
    return doc


def _require(doc: dict, key: str, typ):
    if key not in doc:
        raise SchemaError(f'missing field "{key}"')
    val = doc[key]
    if typ is int and isinstance(val, bool) or not isinstance(val, typ):
        raise SchemaError(f'field "{key}" has the wrong type')
    return val


def _matrix(data, what: str) -> IntMatrix:
    if (
        not isinstance(data, list)
        or not data
        or not all(
            isinstance(row, list) and all(isinstance(x, int) for x in row)
            for row in data
        )
    ):
        raise SchemaError(f"{what} must be a non-empty list of integer rows")
    return IntMatrix.from_rows(data)


def parse_galois_datum(doc: dict) -> GaloisDatum:
    r = _require(doc, "r", int)
    M = _require(doc, "M", int)
    gens = _require(doc, "generators", list)
    pairs = []
    for g in gens:
        if not isinstance(g, dict):
            raise SchemaError("each generator must be an object")
        perm = _require(g, "perm", list)
        unit = _require(g, "unit", int)
        if not all(isinstance(x, int) for x in perm):
            raise SchemaError("perm must be a list of integers")
        pairs.append((tuple(perm), unit))
    return GaloisDatum.from_generators(r, M, pairs)


def parse_involution(doc: dict) -> IntMatrix:
    return _matrix(_require(doc, "matrix", list), "matrix")


def parse_group(spec) -> FiniteGroup:
    if not isinstance(spec, dict):
        raise SchemaError("pi must be an object")
    if "cyclic" in spec:
        return FiniteGroup.cyclic(_require(spec, "cyclic", int))
    if "symmetric" in spec:
        return FiniteGroup.symmetric(_require(spec, "symmetric", int))[0]
    if "klein" in spec:
        c2 = FiniteGroup.cyclic(2)
        return FiniteGroup.direct_product(c2, c2)
    if "table" in spec:
        table = _require(spec, "table", list)
        try:
            return FiniteGroup(tuple(tuple(row) for row in table))
        except TypeError as e:
            raise SchemaError("pi.table must be a square integer table") from e
    raise SchemaError("pi needs one of: cyclic, symmetric, klein, table")


def parse_split_extension(doc: dict) -> SplitExtensionSpec:
    pi = parse_group(_require(doc, "pi", dict))
    action = _require(doc, "action", list)
    if len(action) != pi.order:
        raise SchemaError("one action matrix per group element required")
    mats = tuple(_matrix(m, "action matrix") for m in action)
    N = GLattice(pi, mats[0].rows, mats)
    coeff = _require(doc, "coefficients", dict)
    if "mu" in coeff:
        n = _require(coeff, "mu", int)
        chi = _require(coeff, "chi", list)
        if len(chi) != pi.order or not all(isinstance(x, int) for x in chi):
            raise SchemaError("chi must list one unit per group element")
        M = CoeffModule.mu(pi, n, tuple(chi))
    else:
        rank = _require(coeff, "rank", int)
        modulus = coeff.get("modulus")
        if modulus is not None and not isinstance(modulus, int):
            raise SchemaError("modulus must be an integer or null")
        mlist = _require(coeff, "matrices", list)
        if len(mlist) != pi.order:
            raise SchemaError("one coefficient matrix per group element required")
        M = CoeffModule.make(
            pi, rank, modulus, [_matrix(m, "coefficient matrix") for m in mlist]
        )
    return SplitExtensionSpec(pi, N, M)


# ---------------------------------------------------------------------------
# report rendering
# ---------------------------------------------------------------------------


def group_str(g) -> str:
    return g.describe()


def render_symbol(sym) -> str:
    i, j = sym.pair
    second = f"y{j + 1} - y{i + 1}" if sym.second_argument == "y_j - y_i" else f"y{j + 1}"
    return f"cores_{{E({i + 1},{j + 1})/k}} (y{i + 1}, {second})_{{{sym.modulus}}}"


def emit(report: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    lines = []

    def walk(obj, indent=0):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k in obj:
                v = obj[k]
                if isinstance(v, (dict, list)) and v and not _is_scalar_list(v):
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {_fmt(v)}")
        elif isinstance(obj, list):
            for v in obj:
                if isinstance(v, (dict, list)) and v and not _is_scalar_list(v):
                    lines.append(f"{pad}-")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}- {_fmt(v)}")

    walk(report)
    return "\n".join(lines) + "\n"


def _is_scalar_list(v):
    return isinstance(v, list) and all(
        not isinstance(x, (dict, list)) for x in v
    )


def _fmt(v):
    if isinstance(v, list):
        return "[" + ", ".join(str(x) for x in v) + "]"
    return str(v)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_qt_brauer(doc: dict) -> dict:
    datum = parse_galois_datum(doc)
    basis = symbol_basis(datum)
    oracle, gens = brute_invariants(datum)
    checks = verify_basis(datum)
    indep = representative_independence(datum)
    report = {
        "command": "qt-brauer",
        "version": __version__,
        "input": {"kind": "galois-datum", "r": datum.r, "M": datum.M},
        "group": group_str(basis.group),
        "invariant_factors": list(basis.group.torsion),
        "symbols": [render_symbol(s) for s in basis.symbols],
        "orbits": [
            {
                "pair": [o.pair[0] + 1, o.pair[1] + 1],
                "orbit_size": len(o.orbit),
                "quadratic": o.quadratic,
                "n": o.n,
                "n_prime": o.n_prime,
                "order": o.m_o,
                "stabilizer": list(o.stabilizer_ordered),
            }
            for o in basis.orbits
        ],
        "oracle": group_str(oracle),
        "oracle_generators": [list(g) for g in gens],
        "agreement": basis.agreement,
        "basis_checks": {
            "structure": checks.structure_match,
            "generation": checks.generation,
            "orders": checks.orders_match,
        },
        "representative_independence": indep,
    }
    if not (basis.agreement and checks.ok and indep):
        raise DisagreementError("symbol basis disagrees with the oracle")
    return report


def cmd_real_torus(doc: dict, moduli) -> dict:
    S = parse_involution(doc)
    levels = []
    for n in moduli:
        rep = real_torus_check(S, n)
        levels.append(
            {
                "n": n,
                "d2_zero": rep.d2_is_zero,
                "invariants": group_str(rep.invariants),
            }
        )
    dec = real_torus_check(S, moduli[0]).decomposition
    return {
        "command": "real-torus",
        "version": __version__,
        "input": {"kind": "involution-lattice", "rank": S.rows},
        "decomposition": {"trivial": dec[0], "sign": dec[1], "induced": dec[2]},
        "levels": levels,
        "all_d2_zero": all(level["d2_zero"] for level in levels),
    }


def cmd_d2(doc: dict, rng) -> dict:
    ext = parse_split_extension(doc)
    rep = d2_02(ext)
    verdicts = [
        bool(pushforward_formula_check(ext, gen, rng=rng)) for gen in rep.source.generators
    ]
    return {
        "command": "d2",
        "version": __version__,
        "input": {"kind": "split-extension", "pi_order": ext.pi.order, "rank": ext.N.rank},
        "source": group_str(rep.source),
        "target": group_str(rep.target),
        "d2_matrix": [list(row) for row in rep.matrix.entries],
        "d2_zero": rep.is_zero(),
        "pushforward_formula": verdicts,
    }


def cmd_v2(doc: dict, rng) -> dict:
    ext = parse_split_extension(doc)
    cls = v2(ext.N)
    verdicts = [
        bool(pushforward_formula_check(ext, gen, rng=rng))
        for gen in invariants_finite(lattice_cohomology(ext.N, ext.M, 2)).generators
    ]
    return {
        "command": "v2",
        "version": __version__,
        "input": {"kind": "split-extension", "pi_order": ext.pi.order, "rank": ext.N.rank},
        "v2_coords": list(cls.coords()),
        "v2_zero": cls.is_zero(),
        "pushforward_formula": verdicts,
    }


def _suite_intlat(rng):
    from .intlat import cokernel, smith

    for _ in range(25):
        a = IntMatrix.from_rows(
            [[rng.randrange(-9, 10) for _ in range(4)] for _ in range(4)]
        )
        s = smith(a)
        assert s.U.mul(a).mul(s.V).entries == s.D.entries
        cokernel(a)


def _suite_cohom(rng):
    from .cohomology import cohomology

    for m in (2, 3, 4):
        g = FiniteGroup.cyclic(m)
        mod = CoeffModule.trivial(g, 1, m)
        for q in range(3):
            per = cohomology(g, mod, q, resolution="periodic")
            bar = cohomology(g, mod, q, resolution="bar")
            assert per.group.same_structure(bar.group)


def _suite_twisted(rng):
    from .spectral import twisted_resolution

    c2 = FiniteGroup.cyclic(2)
    swap = GLattice(
        c2, 2, (IntMatrix.identity(2), IntMatrix.from_rows([[0, 1], [1, 0]]))
    )
    mu = CoeffModule.mu(c2, 2, (1, 1))
    ext = SplitExtensionSpec(c2, swap, mu)
    assert twisted_resolution(ext).verify_d_squared()
    assert v2(swap).is_zero()


def _suite_brauer(rng):
    import math

    for _ in range(8):
        r = rng.randrange(2, 5)
        M = rng.choice([2, 4, 6, 8, 12])
        units = [u for u in range(1, M) if math.gcd(u, M) == 1]
        pairs = []
        for _ in range(rng.randrange(0, 3)):
            p = list(range(r))
            rng.shuffle(p)
            pairs.append((tuple(p), rng.choice(units)))
        datum = GaloisDatum.from_generators(r, M, pairs)
        if not verify_basis(datum).ok:
            raise DisagreementError("random sweep found an oracle mismatch")


SUITES = {
    "intlat": _suite_intlat,
    "cohom": _suite_cohom,
    "twisted": _suite_twisted,
    "brauer": _suite_brauer,
}


def cmd_selftest(suite_filter, seed: int) -> dict:
    results = []
    ok = True
    for name, fn in SUITES.items():
        if suite_filter and name != suite_filter:
            continue
        rng = random.Random(seed)
        t0 = time.time()
        try:
            fn(rng)
            passed = True
        except (AssertionError, TorusBrauerError):
            passed = False
            ok = False
        results.append(
            {"suite": name, "passed": passed, "seconds": round(time.time() - t0, 2)}
        )
    report = {
        "command": "selftest",
        "version": __version__,
        "seed": seed,
        "suites": results,
        "all_passed": ok,
    }
    if not ok:
        raise DisagreementError("selftest suite failure")
    return report


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="torusbrauer",
        description="exact Brauer-group and spectral-differential computations",
    )
    p.add_argument("--json", action="store_true", help="emit machine-readable JSON")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("qt-brauer", help="symbol basis with oracle verification")
    q.add_argument("input")

    r = sub.add_parser("real-torus", help="second-page vanishing per level")
    r.add_argument("input")
    r.add_argument(
        "--modulus",
        default="2,4",
        help="comma-separated levels n (default: 2,4)",
    )

    d = sub.add_parser("d2", help="second-page differential of a split extension")
    d.add_argument("input")

    v = sub.add_parser("v2", help="universal degree-two class of the lattice")
    v.add_argument("input")

    s = sub.add_parser("selftest", help="run the invariant suites at desk scale")
    s.add_argument("--suite", choices=sorted(SUITES), default=None)
    return p


def run(argv) -> tuple[int, str]:
    args = build_parser().parse_args(argv)
    rng = random.Random(args.seed)
    try:
        if args.command == "qt-brauer":
            report = cmd_qt_brauer(load_document(args.input))
        elif args.command == "real-torus":
            try:
                moduli = [int(x) for x in args.modulus.split(",") if x]
            except ValueError as e:
                raise SchemaError("--modulus must be a comma-separated int list") from e
            if not moduli:
                raise SchemaError("--modulus must name at least one level")
            report = cmd_real_torus(load_document(args.input), moduli)
        elif args.command == "d2":
            report = cmd_d2(load_document(args.input), rng)
        elif args.command == "v2":
            report = cmd_v2(load_document(args.input), rng)
        else:
            report = cmd_selftest(args.suite, args.seed)
    except SchemaError as e:
        return EXIT_SCHEMA, f"input error: {e}\n"
    except DisagreementError as e:
        return EXIT_DISAGREEMENT, f"disagreement: {e}\n"
    except ValidationError as e:
        return EXIT_VALIDATION, f"validation error: {e}\n"
    return EXIT_OK, emit(report, args.json)


def main(argv=None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stdout if code == EXIT_OK else sys.stderr
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
