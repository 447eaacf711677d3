"""Command-line surface: deterministic, machine-diffable reports.

Every report is plain text followed by a ``---data---`` tail of key=value
lines, so humans and golden tests read the same artifact.  Exit codes:
0 success, 2 input validation, 3 unsupported dimension feature, 4 internal
correctness gate (or failed verification).
"""

from __future__ import annotations

import argparse
import random
import sys
import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import basespace as bsp
from . import minkowski as mk
from . import tangent as tg
from .basespace import CorrectnessError
from .conemonoid import (
    TFunctional,
    boundary_representation,
    deg,
    eta,
    eta_tilde,
    free_pair_decompose,
    functional_equal,
    functional_signature,
    hilbert_basis,
)
from .polytope import PolytopeError, UnsupportedDimensionError, parse_polytope_file


@dataclass
class RunConfig:
    command: str
    input_path: str
    kmax: int | None = None
    degree_bound: int = 3
    strategy: str = "faces-basis"
    out: str | None = None
    seed: int = 0
    maximal: bool = False


@dataclass
class Report:
    lines: list[str] = field(default_factory=list)
    data: dict[str, str] = field(default_factory=dict)

    def add(self, line: str = "") -> None:
        self.lines.append(line)

    def put(self, key: str, value) -> None:
        self.data[key] = str(value)

    def render(self) -> str:
        body = "\n".join(self.lines)
        tail = "\n".join(f"{k}={v}" for k, v in sorted(self.data.items()))
        return f"{body}\n---data---\n{tail}\n"


def split_rng(seed: int, label: str) -> random.Random:
    """Independent deterministic stream per (seed, purpose)."""
    return random.Random(seed ^ zlib.crc32(label.encode()))


def _load(cfg: RunConfig):
    text = Path(cfg.input_path).read_text()
    return parse_polytope_file(text)


def _hilbert(pf):
    return hilbert_basis(pf.polytope, candidates=pf.hilbert_gens)


def _kmax(cfg: RunConfig, p) -> int:
    return cfg.kmax if cfg.kmax is not None else tg.default_kmax(p)


def _fmt_vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _summary(rep: Report, cfg: RunConfig, p) -> None:
    rep.add(f"polytope: dim={p.dim} vertices={len(p.vertices)} edges={p.n_edges}")
    rep.add("vertex list: " + " ".join(_fmt_vec(v) for v in p.vertices))
    rep.add("edge lengths: " + _fmt_vec(p.edge_lengths()))
    rep.put("polytope.dim", p.dim)
    rep.put("polytope.vertices", len(p.vertices))
    rep.put("polytope.edges", p.n_edges)
    rep.put("seed", cfg.seed)


def _t1_section(rep: Report, p, kmax: int) -> None:
    dims = tg.t1_profile(p, kmax)
    rep.add("tangent dims: " + " ".join(f"k={k}:{d}" for k, d in dims.items()))
    for k, d in dims.items():
        rep.put(f"t1.k{k}", d)


def _t2_section(rep: Report, p, hb, kmax: int) -> None:
    methods = ["general"]
    if p.dim == 2:
        methods += ["lattice3d", "closedform3d"]
    for method in methods:
        prof = tg.t2_profile(p, hb, method, kmax)
        rep.add(f"obstruction dims [{method}]: " + " ".join(f"k={k}:{d}" for k, d in prof.dims.items()))
        for k, d in prof.dims.items():
            rep.put(f"t2.{method}.k{k}", d)
        if prof.n1 is not None:
            rep.add(
                f"width/length constants: n1={prof.n1} n2={prof.n2} l1={prof.l1} l2={prof.l2}"
            )
            for name in ("n1", "n2", "l1", "l2"):
                rep.put(f"const.{name}", getattr(prof, name))


def cmd_analyze(cfg: RunConfig) -> str:
    pf = _load(cfg)
    p = pf.polytope
    rep = Report()
    _summary(rep, cfg, p)
    hb = _hilbert(pf)
    rep.add(f"dual monoid generators (r={hb.r}) plus distinguished (0,1):")
    for c, h in hb.elements:
        rep.add(f"  gen c={_fmt_vec(c)} eta={h}")
    rep.put("hilbert.r", hb.r)
    kmax = _kmax(cfg, p)
    rep.put("kmax", kmax)
    _t1_section(rep, p, kmax)
    _t2_section(rep, p, hb, kmax)
    t0b = {k: tg.t0b_basis(p, k).dim for k in range(1, kmax + 1)}
    rep.add("base tangent dims: " + " ".join(f"k={k}:{d}" for k, d in t0b.items()))
    for k, d in t0b.items():
        rep.put(f"t0b.k{k}", d)
    return rep.render()


def cmd_t1(cfg: RunConfig) -> str:
    pf = _load(cfg)
    p = pf.polytope
    rep = Report()
    _summary(rep, cfg, p)
    _t1_section(rep, p, _kmax(cfg, p))
    return rep.render()


def cmd_t2(cfg: RunConfig) -> str:
    pf = _load(cfg)
    p = pf.polytope
    rep = Report()
    _summary(rep, cfg, p)
    _t2_section(rep, p, _hilbert(pf), _kmax(cfg, p))
    return rep.render()


def cmd_base_ideal(cfg: RunConfig) -> str:
    pf = _load(cfg)
    p = pf.polytope
    rep = Report()
    _summary(rep, cfg, p)
    bs = bsp.build_base_space(p, cfg.strategy)
    rep.add(f"generator strategy: {bs.ttilde.strategy}")
    rep.add("edge-ideal binomials:")
    for gen in bs.ttilde.generators:
        rep.add(f"  d={_fmt_vec(gen.d)}: {gen.binomial.render()}")
    rep.add("base ideal generators:")
    for i, g in enumerate(bs.ib_full, start=1):
        rep.add(f"  IB[{i}] = {g.render()}")
        rep.put(f"ib.{i}", g.render())
    rep.add("chosen basis: " + " ".join(v.name() for v in bs.basis))
    rep.put("basis", " ".join(v.name() for v in bs.basis))
    rep.add("elimination map:")
    for v in sorted(bs.elimination_map):
        rep.add(f"  {v.name()} = {bs.elimination_map[v].render()}")
        rep.put(f"elim.{v.name()}", bs.elimination_map[v].render())
    rep.add("reduced ideal generators:")
    if bs.ib_reduced:
        for i, g in enumerate(bs.ib_reduced, start=1):
            rep.add(f"  Ib[{i}] = {g.render()}")
            rep.put(f"ibred.{i}", g.render())
    else:
        rep.add("  (none: smooth base)")
        rep.put("ibred.count", 0)
    kmax = _kmax(cfg, p)
    wdims = bsp.w_graded_dims(bs, kmax)
    rep.add("minimal generator counts: " + " ".join(f"k={k}:{d}" for k, d in wdims.items()))
    for k, d in wdims.items():
        rep.put(f"w.k{k}", d)
    return rep.render()


def cmd_family(cfg: RunConfig) -> str:
    pf = _load(cfg)
    p = pf.polytope
    rep = Report()
    _summary(rep, cfg, p)
    hb = _hilbert(pf)
    fam = bsp.family_binomials(p, hb, cfg.degree_bound)
    rep.add(f"family members up to exponent degree {fam.degree_bound}: {len(fam.members)}")
    rep.put("family.count", len(fam.members))
    rep.put("family.degree_bound", fam.degree_bound)
    for i, m in enumerate(fam.members, start=1):
        rep.add(f"  k={_fmt_vec(m.k)}")
        rep.add(f"    f   = {m.f.render()}")
        rep.add(f"    F   = {m.F.render()}")
        rep.add(f"    F_T = {m.F_T.render()}")
        rep.put(f"family.{i}.f", m.f.render())
        rep.put(f"family.{i}.FT", m.F_T.render())
    return rep.render()


def cmd_minkowski(cfg: RunConfig) -> str:
    pf = _load(cfg)
    p = pf.polytope
    rep = Report()
    _summary(rep, cfg, p)
    if pf.decompositions is not None:
        decs = [mk.validate_decomposition(p, s) for s in pf.decompositions]
        rep.add("decompositions supplied by the input file (validated)")
    else:
        decs = mk.enumerate_decompositions(p, maximal_only=False)
        rep.add(f"decompositions (all, up to translation/permutation): {len(decs)}")
        rep.put("mink.count", len(decs))
        for i, dec in enumerate(decs, start=1):
            rep.add(f"  dec[{i}] summand splits: " + " ".join(_fmt_vec(z) for z in dec.splits))
        decs = mk.enumerate_decompositions(p, maximal_only=True)
    rep.add(f"maximal decompositions: {len(decs)}")
    rep.put("mink.maximal", len(decs))
    bs = bsp.build_base_space(p, cfg.strategy)
    rng = split_rng(cfg.seed, "component-dimension")
    report = mk.correspondence_report(p, bs, decs, rng)
    for i, row in enumerate(report.rows, start=1):
        rep.add(f"maximal dec[{i}]: splits " + " ".join(_fmt_vec(z) for z in row.dec.splits))
        if row.dec.summands is not None:
            for k, cyc in enumerate(row.dec.summands):
                rep.add(f"    summand K{k}: " + " ".join(_fmt_vec(v) for v in cyc))
        g_res = mk.map_g(p, row.dec, bs)
        f_res = mk.map_f(p, row.dec, bs.ttilde)
        for ei in range(1, p.n_edges + 1):
            from .polyring import uvar

            rep.add(f"    f(u{ei}) = {f_res.assignment[uvar(ei)].render()}")
        for v in sorted(g_res.assignment):
            rep.add(f"    g({v.name()}) = {g_res.assignment[v].render()}")
        rep.add(
            f"    checks: monomial-map={_okfail(row.f_ok)} expansion-identity={_okfail(row.fui_ok)}"
            f" base-vanishing={_okfail(row.base_ok)} u0-edge-split={row.u0_split}"
        )
        rep.add(f"    image dimension = {row.image_dim} (draws={row.draws})")
        comp = "none" if row.component_index is None else f"component[{row.component_index + 1}]"
        rep.add(f"    matched {comp}")
        rep.put(f"mink.{i}.f_ok", row.f_ok)
        rep.put(f"mink.{i}.fui_ok", row.fui_ok)
        rep.put(f"mink.{i}.base_ok", row.base_ok)
        rep.put(f"mink.{i}.dim", row.image_dim)
        rep.put(f"mink.{i}.component", comp)
    if report.complete:
        rep.add(f"components of the reduced base: {len(report.components)}")
        for i, comp in enumerate(report.components, start=1):
            forms = ", ".join(f.render() for f in comp.forms) if comp.forms else "(whole space)"
            rep.add(f"  component[{i}]: dim={comp.dim} cut by {forms}")
        rep.add(f"correspondence bijective: {report.bijective}")
        rep.put("mink.components", len(report.components))
        rep.put("mink.bijective", report.bijective)
    else:
        rep.add("verification partial: inclusion in the base verified only")
        rep.put("mink.partial", True)
    return rep.render()


def _okfail(b: bool) -> str:
    return "ok" if b else "FAIL"


def cmd_export_cas(cfg: RunConfig) -> str:
    pf = _load(cfg)
    p = pf.polytope
    bs = bsp.build_base_space(p, cfg.strategy)
    fam = bsp.family_binomials(p, _hilbert(pf), cfg.degree_bound)
    return bsp.export_cas(bs, fam)


# ---------------------------------------------------------------------------
# verify: every cross-check, structured pass/fail list


def _verify_checks(cfg: RunConfig, pf) -> list[tuple[str, bool, str]]:
    p = pf.polytope
    hb = _hilbert(pf)
    kmax = _kmax(cfg, p)
    checks: list[tuple[str, bool, str]] = []

    prop = tg.check_prop32(p, kmax)
    checks.append(
        (
            "tangent-dimension-match",
            prop.ok,
            " ".join(f"k={k}:{a}/{b}" for k, a, b in prop.rows),
        )
    )

    if p.dim == 2:
        ok = True
        detail = []
        for k in range(1, kmax + 1):
            a = tg.t2_dimension_general(p, hb, k)
            b = tg.t2_dimension_lattice3d(p, hb, k)
            n1, n2 = tg.width_constants(p)
            l1, l2 = tg.length_constants(p)
            c = tg.t2_closed_form_value(l1, l2, n1, n2, k)
            ok = ok and a == b == c
            detail.append(f"k={k}:{a}/{b}/{c}")
        checks.append(("obstruction-three-way", ok, " ".join(detail)))

    bs = bsp.build_base_space(p, cfg.strategy)
    wdims = bsp.w_graded_dims(bs, kmax)
    ok = True
    detail = []
    for k in range(1, kmax + 1):
        t2 = tg.t2_dimension_general(p, hb, k)
        ok = ok and wdims[k] <= t2
        detail.append(f"k={k}:{wdims[k]}<={t2}")
    checks.append(("obstruction-bound", ok, " ".join(detail)))

    rng = split_rng(cfg.seed, "additivity")
    ok = True
    for trial in range(10):
        d = bsp.random_perp_vector(p, rng)
        e = bsp.random_perp_vector(p, rng)
        if not any(d) or not any(e):
            continue
        pd = bsp.coefficient_extraction(p, d)
        pe = bsp.coefficient_extraction(p, e)
        pde = bsp.coefficient_extraction(p, tuple(a + b for a, b in zip(d, e)))
        for k in set(pd) | set(pe) | set(pde):
            diff = (
                pde.get(k, bsp.Polynomial.zero())
                - pd.get(k, bsp.Polynomial.zero())
                - pe.get(k, bsp.Polynomial.zero())
            )
            if not bsp.reduces_to_zero_in_w(bs, diff):
                ok = False
    checks.append(("graded-additivity", ok, "10 random pairs"))

    ok = True
    groups: dict = {}
    for k in bsp._exponent_tuples(hb.r, 3):
        decq = free_pair_decompose(p, hb, k)
        sum_eta = TFunctional((0,) * p.n_edges)
        for kj, (cj, _) in zip(k, hb.elements):
            if kj:
                sum_eta = sum_eta + eta_tilde(p, cj).scale(kj)
        key = (decq.boundary_c, functional_signature(p, sum_eta))
        groups.setdefault(key, []).append(decq)
        ok = ok and all(a >= 0 and a % e.length == 0 for a, e in zip(decq.lam_tilde.coeffs, p.edges))
        ok = ok and decq.lam == sum(decq.lam_tilde.coeffs)
        recon = decq.lam_tilde + decq.boundary_eta_tilde
        ok = ok and functional_equal(p, recon, sum_eta)
    for members in groups.values():
        first = members[0]
        for other in members[1:]:
            ok = ok and other.boundary_c == first.boundary_c
            ok = ok and functional_equal(p, other.lam_tilde, first.lam_tilde)
    checks.append(("free-pair-decomposition", ok, f"{len(groups)} sum classes"))

    ok = True
    box = range(-3, 4)
    if p.dim <= 2:
        import itertools

        for c in itertools.product(box, repeat=p.dim):
            if deg(eta_tilde(p, c)) != eta(p, c):
                ok = False
    checks.append(("support-degree-identity", ok, "|c| <= 3 box"))

    if p.dim <= 2:
        decs = (
            [mk.validate_decomposition(p, s) for s in pf.decompositions]
            if pf.decompositions is not None
            else mk.enumerate_decompositions(p, maximal_only=True)
        )
        rng = split_rng(cfg.seed, "component-dimension")
        rep = mk.correspondence_report(p, bs, decs, rng)
        ok = all(r.f_ok and r.fui_ok and r.base_ok for r in rep.rows)
        if rep.complete and rep.bijective is False:
            ok = False
        checks.append(
            (
                "decomposition-maps",
                ok,
                f"{len(rep.rows)} maximal decompositions, bijective={rep.bijective}",
            )
        )
    return checks


def cmd_verify(cfg: RunConfig) -> tuple[str, bool]:
    pf = _load(cfg)
    rep = Report()
    _summary(rep, cfg, pf.polytope)
    checks = _verify_checks(cfg, pf)
    all_ok = all(ok for _, ok, _ in checks)
    for name, ok, detail in checks:
        rep.add(f"check {name}: {'pass' if ok else 'FAIL'} ({detail})")
        rep.put(f"check.{name}", "pass" if ok else "fail")
    rep.add(f"verification: {'pass' if all_ok else 'FAIL'}")
    rep.put("verify.ok", all_ok)
    return rep.render(), all_ok


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="toricdef",
        description="deformation data of the Gorenstein toric variety attached to a lattice polytope",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("analyze", "t1", "t2", "base-ideal", "family", "minkowski", "verify", "export-cas"):
        sp = sub.add_parser(name)
        sp.add_argument("input", help="polytope input file")
        sp.add_argument("--kmax", type=int, default=None, help="largest degree to report")
        sp.add_argument("--degree-bound", type=int, default=3, help="family exponent bound")
        sp.add_argument(
            "--strategy",
            choices=("faces-basis", "minimal-width"),
            default="faces-basis",
            help="edge-ideal generator strategy",
        )
        sp.add_argument("--seed", type=int, default=0, help="seed for random rational points")
        sp.add_argument("--out", default=None, help="write the report to this path")
        sp.add_argument("--maximal", action="store_true", help="maximal decompositions only")
    return ap


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=ns.command,
        input_path=ns.input,
        kmax=ns.kmax,
        degree_bound=ns.degree_bound,
        strategy=ns.strategy,
        out=ns.out,
        seed=ns.seed,
        maximal=ns.maximal,
    )
    try:
        status = 0
        if cfg.command == "analyze":
            text = cmd_analyze(cfg)
        elif cfg.command == "t1":
            text = cmd_t1(cfg)
        elif cfg.command == "t2":
            text = cmd_t2(cfg)
        elif cfg.command == "base-ideal":
            text = cmd_base_ideal(cfg)
        elif cfg.command == "family":
            text = cmd_family(cfg)
        elif cfg.command == "minkowski":
            text = cmd_minkowski(cfg)
        elif cfg.command == "export-cas":
            text = cmd_export_cas(cfg)
        elif cfg.command == "verify":
            text, ok = cmd_verify(cfg)
            status = 0 if ok else 4
        else:  # pragma: no cover
            raise AssertionError(cfg.command)
    except (PolytopeError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except UnsupportedDimensionError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return 3
    except CorrectnessError as exc:
        print(f"internal correctness gate: {exc}", file=sys.stderr)
        return 4
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
