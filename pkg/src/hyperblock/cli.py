"""Command-line front end: build, verify, analyze, and export.

Commands: build3d, verify, design, surface, links, analyze, summary.
Exit codes: 0 all requested verifications pass, 1 usage/config error,
2 a verification failed (a machine-readable report is still produced).
Reports and exports are canonical JSON (sorted keys, no timestamps) with a
sha256 content digest, so identical configs give byte-identical files.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .arith import I, ONE, ZERO, make_field
from .cellulation import (
    axis_stabilizer_intersection,
    build_cellulation,
    one_factorization_k6,
    verify_strongly_regular,
    verify_tiling_lemma,
)
from .cusplink import band_partition, cusp_link, manifold_summary, split_links
from .errors import BadSizes, CapExceeded, HyperblockError, InadmissibleOrder
from .group import base_cusp, cusp_stabilizer, from_int_matrix, identity
from .scheme import (
    DEFAULT_SEED,
    EXHAUSTIVE_MAX_POINTS,
    build_scheme,
    pbibd_report,
    spectral_gap,
    verify_scheme_axioms,
)
from .surface import build_surface, surface_adjacency, verify_flag_transitive, verify_surface

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2

Q5_NOTE = (
    "q=5 exception path: the edge graph is complete (K6) and the block "
    "diagonals sweep all 15 pairs, so parts 2 and 4 fail by design and the "
    "diagonals form a 1-factorization"
)


@dataclass
class RunConfig:
    command: str
    q: int
    bands: tuple[int, int, int] | None = None
    depth: str = "full"
    output: str | None = None
    format: str = "json"
    seed: int = DEFAULT_SEED


def canonical_json_bytes(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n").encode()


def with_digest(doc: dict) -> dict:
    body = {k: v for k, v in doc.items() if k != "digest"}
    out = dict(body)
    out["digest"] = hashlib.sha256(canonical_json_bytes(body)).hexdigest()
    return out


def write_atomic(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".hyperblock-")
    try:
        os.write(fd, data)
        os.close(fd)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.close(fd)
        except OSError:
            pass
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _claim(fn):
    """Run a claim builder; any verification error becomes a failing claim."""
    try:
        return fn()
    except HyperblockError as exc:
        return {"pass": False, "error": f"{type(exc).__name__}: {exc}"}


def encode_elem(field, e: int) -> int:
    lift = field.canonical_lift(e)
    return lift.x + field.p * lift.y


def _counts_claim(cell) -> dict:
    q = cell.q
    ok = (
        len(cell.cusps) == (q * q - 1) // 4
        and len(cell.blocks) == q * (q * q - 1) // 24
        and all(len(bs) == q for bs in cell.blocks_at)
        and len(cell.table) == q * (q * q - 1) // 2
        and len(cell.edges) == 3 * len(cell.blocks)
        and len(cell.diagonals) == 3 * len(cell.blocks)
    )
    return {
        "pass": bool(ok),
        "cusps": len(cell.cusps),
        "blocks": len(cell.blocks),
        "replication": q,
        "group_order": len(cell.table),
        "edges": len(cell.edges),
        "diagonals": len(cell.diagonals),
    }


def _tiling_claims(cell) -> dict:
    rep = verify_tiling_lemma(cell)
    expected = rep.expected_failed_parts
    claims = {}
    names = (
        "tiling_distinct_vertices",
        "tiling_no_multi_edges",
        "tiling_diagonal_determines_block",
        "tiling_edges_avoid_diagonals",
    )
    for i, name in enumerate(names):
        holds = rep.parts[i]
        should = (i + 1) not in expected
        claims[name] = {
            "holds": bool(holds),
            "expected_to_hold": should,
            "pass": bool(holds == should),
        }
    if cell.q == 5:
        claims["q5_note"] = Q5_NOTE
    return claims


def _stabilizer_claims(cell) -> dict:
    f = cell.field
    q = cell.q
    inf = base_cusp(f)
    stab = cusp_stabilizer(cell.table, inf)
    inter = axis_stabilizer_intersection(cell)
    psi = from_int_matrix(f, ((-I, I - ONE), (ZERO, I)))
    ident = identity(f)
    inter_ok = len(inter) == 2 and set(inter) == {ident, psi}
    return {
        "stabilizer_size": {"pass": len(stab) == 2 * q, "size": len(stab), "expected": 2 * q},
        "axis_stabilizer_pair": {
            "pass": bool(inter_ok),
            "size": len(inter),
            "nonidentity_is_half_turn": bool(psi in inter),
        },
    }


def _lemma_claims(cell) -> dict:
    claims = _tiling_claims(cell)
    if cell.q > 5:
        claims["strongly_regular"] = _claim(
            lambda: {"pass": bool(verify_strongly_regular(cell))}
        )
    else:
        claims["one_factorization_k6"] = _claim(
            lambda: {
                "pass": True,
                "matchings": [[list(p) for p in m] for m in one_factorization_k6(cell)],
            }
        )
    claims.update(_stabilizer_claims(cell))
    return claims


def _links_claim(cell, banding, seed: int) -> dict:
    if cell.q <= 13:
        targets = list(cell.cusps)
    else:
        rng = random.Random(seed)
        targets = [base_cusp(cell.field)]
        targets += rng.sample(list(cell.cusps), 5)
    spheres = 0
    circles_ok = True
    for x in targets:
        link = cusp_link(cell, x)
        res = split_links(link, banding)
        if not res.all_spheres:
            return {"pass": False, "failed_cusp": [x.u, x.w]}
        spheres += 3
        circles_ok = circles_ok and all(
            c.boundary_lengths[0] > 0 and c.boundary_lengths[1] > 0 for c in res.complexes
        )
    return {
        "pass": bool(circles_ok),
        "cusps_checked": len(targets),
        "spheres_verified": spheres,
        "band_sizes": list(banding.sizes) if banding else list(band_partition(cell.field).sizes),
    }


def _spectral_claim(cell) -> dict:
    rep = spectral_gap(cell)
    ok = abs(rep.lambda_max - cell.q) <= 1e-8 and rep.agreement <= 1e-6
    return {
        "pass": bool(ok),
        "lambda_max": rep.lambda_max,
        "lambda_2": rep.lambda_2,
        "ramanujan_reference": rep.ramanujan,
        "solver_agreement": rep.agreement,
    }


def _scheme_claims(cell, seed: int) -> dict:
    scheme = build_scheme(cell.table, cell.cusps, cell.transversal)
    mode = "exhaustive" if len(scheme.cusps) <= EXHAUSTIVE_MAX_POINTS else "sampled"
    axiom = verify_scheme_axioms(scheme, mode=mode, seed=seed)
    claims = {
        "scheme_axioms": {
            "pass": bool(axiom.passed),
            "mode": axiom.mode,
            "m": scheme.m,
            "valencies": list(scheme.valencies),
        }
    }
    if cell.q > 5:
        rep = pbibd_report(cell, scheme, axiom)
        claims["pbibd"] = {
            "pass": bool(rep.passed),
            "v": rep.v,
            "b": rep.b,
            "r": rep.r,
            "k": rep.k,
            "m": rep.m,
            "lambda_by_class": {str(k): v for k, v in sorted(rep.lambda_by_class.items())},
            "edge_classes": sorted(rep.class_of_edges),
            "diagonal_classes": sorted(rep.class_of_diagonals),
        }
    return claims


def _summary_claim(cell, banding) -> dict:
    s = manifold_summary(cell, banding)
    return {
        "pass": True,
        "n_vertices": s.n_vertices,
        "n_blocks": s.n_blocks,
        "log3_triangulation_choices": s.log3_triangulation_choices,
        "ratio_n32_blocks": s.ratio_n32_blocks,
        "band_sizes": list(s.band_sizes),
    }


def _report(config: RunConfig, claims: dict) -> tuple[int, dict]:
    passed = all(
        c.get("pass", True) for c in claims.values() if isinstance(c, dict)
    )
    report = {
        "tool": "hyperblock",
        "command": config.command,
        "config": {
            "q": config.q,
            "depth": config.depth,
            "bands": list(config.bands) if config.bands else None,
            "format": config.format,
            "seed": config.seed,
        },
        "claims": claims,
        "pass": bool(passed),
    }
    return (EXIT_OK if passed else EXIT_VERIFY_FAILED), with_digest(report)


def design_export(cell, scheme, axiom, lemma_ok: bool, sr_ok: bool | None) -> dict:
    f = cell.field
    lam: dict[str, int] = {}
    if cell.q > 5:
        rep = pbibd_report(cell, scheme, axiom)
        lam = {str(k): v for k, v in sorted(rep.lambda_by_class.items())}
        design_ok = rep.passed
    else:
        design_ok = None
    header = {
        "q": cell.q,
        "pi": [f.pi.x, f.pi.y],
        "v": len(cell.cusps),
        "b": len(cell.blocks),
        "r": cell.q,
        "k": 6,
        "m": scheme.m,
        "lambda_by_class": lam,
        "verification": {
            "tiling_lemma": bool(lemma_ok),
            "strongly_regular": sr_ok,
            "scheme_axioms": bool(axiom.passed),
            "design": design_ok,
        },
    }
    vertices = [[encode_elem(f, c.u), encode_elem(f, c.w)] for c in cell.cusps]
    blocks = [
        {"verts": list(v), "diagonals": [list(p) for p in pairs]}
        for v, pairs in zip(cell.block_verts, cell.block_pairs)
    ]
    class_digest = hashlib.sha256(
        canonical_json_bytes(scheme.class_matrix.tolist())
    ).hexdigest()
    return with_digest(
        {
            "header": header,
            "vertices": vertices,
            "blocks": blocks,
            "class_map_digest": class_digest,
        }
    )


def incidence_csv(cell) -> str:
    rows = []
    memb = [set(v) for v in cell.block_verts]
    for vi in range(len(cell.cusps)):
        rows.append(",".join("1" if vi in m else "0" for m in memb))
    return "\n".join(rows) + "\n"


def surface_off(s) -> str:
    """OFF text; counts line is 'v e t' and faces use the coherent orientation."""
    A = surface_adjacency(s)
    w, V = _kernels.jacobi_eigh(A)
    cols = V[:, [-2, -3, -4]]
    norms = np.linalg.norm(cols, axis=1)
    norms[norms == 0] = 1.0
    coords = cols / norms[:, None]
    lines = ["OFF", f"{len(s.vertices)} {len(s.edges)} {len(s.triangles)}"]
    for row in coords:
        lines.append(" ".join(f"{x:.12f}" for x in row))
    for tri in s.oriented if s.oriented else s.triangles:
        lines.append("3 " + " ".join(str(i) for i in tri))
    return "\n".join(lines) + "\n"


def _merge(claims: dict, name: str, builder) -> None:
    """Merge a multi-claim builder; an error becomes one failing claim."""
    try:
        claims.update(builder())
    except HyperblockError as exc:
        claims[name] = {"pass": False, "error": f"{type(exc).__name__}: {exc}"}


def _cmd_verify(config: RunConfig) -> tuple[int, dict]:
    field = make_field(config.q)
    banding = band_partition(field, config.bands) if config.bands else None
    claims: dict = {}
    try:
        cell = build_cellulation(field)
    except (InadmissibleOrder, CapExceeded):
        raise
    except HyperblockError as exc:
        claims["build"] = {"pass": False, "error": f"{type(exc).__name__}: {exc}"}
        return _report(config, claims)
    claims["counts"] = _counts_claim(cell)
    if config.depth in ("lemmas", "full"):
        _merge(claims, "lemmas", lambda: _lemma_claims(cell))
    if config.depth == "full":
        _merge(claims, "scheme", lambda: _scheme_claims(cell, config.seed))
        claims["cusp_links"] = _claim(lambda: _links_claim(cell, banding, config.seed))
        claims["spectral"] = _claim(lambda: _spectral_claim(cell))
        claims["manifold_counts"] = _claim(lambda: _summary_claim(cell, banding))
    return _report(config, claims)


def _cmd_build3d(config: RunConfig) -> tuple[int, dict | str]:
    field = make_field(config.q)
    cell = build_cellulation(field)
    scheme = build_scheme(cell.table, cell.cusps, cell.transversal)
    mode = "exhaustive" if len(scheme.cusps) <= EXHAUSTIVE_MAX_POINTS else "sampled"
    axiom = verify_scheme_axioms(scheme, mode=mode, seed=config.seed)
    lemma = verify_tiling_lemma(cell)
    sr = verify_strongly_regular(cell) if cell.q > 5 else None
    if config.format == "csv":
        ok = lemma.ok and (sr is not False) and axiom.passed
        return (EXIT_OK if ok else EXIT_VERIFY_FAILED), incidence_csv(cell)
    doc = design_export(cell, scheme, axiom, lemma.ok, sr)
    ok = lemma.ok and (sr is not False) and axiom.passed
    return (EXIT_OK if ok else EXIT_VERIFY_FAILED), doc


def _cmd_surface(config: RunConfig) -> tuple[int, dict | str]:
    s = build_surface(config.q)
    rep = verify_surface(s)
    flags = verify_flag_transitive(s)
    ok = rep.passed and flags
    if config.format == "off":
        return (EXIT_OK if ok else EXIT_VERIFY_FAILED), surface_off(s)
    chi = rep.details["euler"]
    claims = {
        "surface": {
            "pass": bool(ok),
            "v": rep.details["v"],
            "e": rep.details["e"],
            "t": rep.details["t"],
            "euler": chi,
            "genus": (2 - chi) // 2 if ok else None,
            "simplicial": rep.simplicial,
            "links_are_q_cycles": rep.links_are_q_cycles,
            "orientable": rep.orientable,
            "flag_transitive": bool(flags),
        }
    }
    return _report(config, claims)


def _cmd_links(config: RunConfig) -> tuple[int, dict]:
    field = make_field(config.q)
    banding = band_partition(field, config.bands) if config.bands else None
    cell = build_cellulation(field)
    claims = {"cusp_links": _claim(lambda: _links_claim(cell, banding, config.seed))}
    return _report(config, claims)


def _cmd_analyze(config: RunConfig) -> tuple[int, dict]:
    field = make_field(config.q)
    cell = build_cellulation(field)
    claims = {"spectral": _claim(lambda: _spectral_claim(cell))}
    return _report(config, claims)


def _cmd_summary(config: RunConfig) -> tuple[int, dict]:
    field = make_field(config.q)
    banding = band_partition(field, config.bands) if config.bands else None
    cell = build_cellulation(field)
    claims = {"manifold_counts": _claim(lambda: _summary_claim(cell, banding))}
    return _report(config, claims)


def _cmd_design(config: RunConfig) -> tuple[int, dict | str]:
    return _cmd_build3d(config)


_HANDLERS = {
    "verify": _cmd_verify,
    "build3d": _cmd_build3d,
    "design": _cmd_design,
    "surface": _cmd_surface,
    "links": _cmd_links,
    "analyze": _cmd_analyze,
    "summary": _cmd_summary,
}


def run(config: RunConfig) -> tuple[int, dict | str]:
    """Execute one command; raises InadmissibleOrder/BadSizes on bad input."""
    if config.command not in _HANDLERS:
        raise ValueError(f"unknown command {config.command!r}")
    if config.command == "surface":
        if config.format not in ("off", "json"):
            raise ValueError(f"surface format must be off or json, got {config.format!r}")
    elif config.command in ("build3d", "design"):
        if config.format not in ("json", "csv"):
            raise ValueError(f"design format must be json or csv, got {config.format!r}")
    return _HANDLERS[config.command](config)


def _parse_bands(text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"expected three comma-separated sizes, got {text!r}"
        )
    return parts


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperblock",
        description="Build and verify octahedral block complexes, designs, "
        "surfaces, and cusp links over PSL2 of a finite field.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "build3d": "build the block complex and export it (json or csv)",
        "verify": "run the verification suites at the chosen depth",
        "design": "export the block design (json or csv incidence matrix)",
        "surface": "build/verify the 2D surface; export OFF or a json report",
        "links": "verify torus links and their three sphere splittings",
        "analyze": "spectral report for the edge graph",
        "summary": "vertex/block counts after the three-way cusp split",
    }
    for name, help_text in specs.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--q", type=int, required=True, help="field order")
        p.add_argument("-o", "--output", help="write the artifact to this path")
        p.add_argument("--seed", type=lambda x: int(x, 0), default=DEFAULT_SEED)
        if name == "verify":
            p.add_argument("--depth", choices=("counts", "lemmas", "full"), default="full")
        if name in ("verify", "links", "summary"):
            p.add_argument("--bands", type=_parse_bands, default=None)
        if name in ("build3d", "design"):
            p.add_argument("--format", choices=("json", "csv"), default="json")
        elif name == "surface":
            p.add_argument("--format", choices=("off", "json"), default="off")
    return parser


def main(argv=None) -> int:
    _kernels.apply_thread_cap()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # map argparse's usage exit (2) onto the usage code; keep --help at 0
        return EXIT_OK if not exc.code else EXIT_USAGE
    config = RunConfig(
        command=args.command,
        q=args.q,
        bands=getattr(args, "bands", None),
        depth=getattr(args, "depth", "full"),
        output=args.output,
        format=getattr(args, "format", "json"),
        seed=args.seed,
    )
    try:
        code, payload = run(config)
    except (InadmissibleOrder, BadSizes, CapExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(payload, str):
        data = payload.encode()
    else:
        data = canonical_json_bytes(payload)
    if config.output:
        try:
            write_atomic(config.output, data)
        except OSError as exc:
            print(f"error: cannot write {config.output}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(data.decode())
    return code


if __name__ == "__main__":
    sys.exit(main())
