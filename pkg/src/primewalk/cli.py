"""Command-line experiment driver; every subcommand writes CSV with a '#'-prefixed manifest."""
import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone
from fractions import Fraction

import numpy as np

from . import __version__
from . import block_ensemble as be
from . import kac, lfunc, residue_stats as rs
from .characters import character, enumerate_characters, find_character, totient
from .errors import DomainError, ResourceError
from .primes import sieve, sieve_count
from .random_ensemble import clt_experiment, sample_state
from .series import B_series, scaling_exponent
from .stats_core import linfit


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


class Table:
    """One CSV output: header, rows and trailing summary comments."""

    def __init__(self, columns, name=None):
        self.columns, self.rows, self.notes, self.name = list(columns), [], [], name

    def add(self, *row):
        self.rows.append(row)

    def render(self, manifest):
        buf = io.StringIO()
        for line in manifest:
            buf.write(f"# {line}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([fmt(v) for v in r])
        for n in self.notes:
            buf.write(f"# {n}\n")
        return buf.getvalue()


def parse_int(text):
    """Integers with 1e5 or 5^8 shorthand."""
    text = str(text).strip()
    if "^" in text:
        b, e = text.split("^")
        return int(b) ** int(e)
    return int(float(text)) if "e" in text.lower() else int(text)


def resolve_chi(q, spec):
    """Character from a 1-based canonical index or a comma-separated value row."""
    if spec is None:
        raise UsageError("--chi is required")
    spec = str(spec)
    if "," not in spec:
        return character(q, int(spec))
    row = [complex(tok.strip().replace("i", "j")) for tok in spec.split(",")]
    return find_character(q, row, tol=1e-3)


def chi_row_text(chi):
    return ";".join("-" if f is None else str(f) for f in (chi.angle(m) for m in range(1, chi.q + 1)))


def store_for(n):
    return sieve_count(n)


# ---------------------------------------------------------------- subcommands

def cmd_primes(a):
    store = sieve(parse_int(a.limit))
    if a.count_only:
        t = Table(["limit", "count"])
        t.add(store.limit, len(store))
        return [t]
    t = Table(["n", "p_n"])
    for n, p in enumerate(store.primes, start=1):
        t.add(n, int(p))
    return [t]


def cmd_chars(a):
    q = _need_q(a)
    chars = enumerate_characters(q)
    if a.table:
        t = Table(["j", "m", "re", "im", "angle_num", "angle_den"])
        for chi in chars:
            v = chi.values()
            for m in range(1, q + 1):
                f = chi.angle(m)
                num, den = (f.numerator, f.denominator) if f is not None else ("", "")
                t.add(chi.j, m, v[m % q].real, v[m % q].imag, num, den)
    else:
        t = Table(["j", "order", "parity", "primitive", "angles_over_2pi"])
        for chi in chars:
            t.add(chi.j, chi.order, chi.parity, chi.is_primitive, chi_row_text(chi))
    t.notes.append(f"phi(q) = {totient(q)}")
    return [t]


def cmd_series(a):
    q = _need_q(a)
    chi = resolve_chi(q, a.chi)
    N = parse_int(a.n)
    store = store_for(N)
    if a.mode == "exponent":
        t = Table(["t", "alpha", "stderr"])
        for tv in [float(x) for x in a.t_list.split(",")]:
            alpha, err = scaling_exponent(B_series(chi, tv, N, store), (100, N))
            t.add(tv, alpha, err)
        return [t]
    trace = B_series(chi, a.t, N, store)
    t = Table(["n", "B_n"])
    for n in range(a.stride, N + 1, a.stride):
        t.add(n, trace.values[n - 1])
    t.notes.append("n counts prime indices including primes dividing q (which contribute 0)")
    return [t]


def cmd_ensemble(a):
    q = _need_q(a)
    chi = resolve_chi(q, a.chi)
    N = parse_int(a.n)
    rep = clt_experiment(chi, a.t, a.m, N, a.states, a.seed, store_for(N))
    t = Table(["state", "statistic"])
    for i, v in enumerate(rep.samples):
        t.add(i, v)
    t.notes.append(f"summary mean,std = {fmt(rep.mean)},{fmt(rep.std)}")
    return [t]


def cmd_lfunc(a):
    if a.mode == "chernoff":
        scan = lfunc.chernoff_scan((a.t0, a.t1), a.step, parse_int(a.n), a.sigma)
        t = Table(["t", "abs_zeta_prime", "stable"])
        for tv, lv, st in zip(scan.t, scan.log_abs, scan.stable):
            t.add(tv, math.exp(lv), st)
        t.notes.append(f"stable zero candidates below 0.05: {len(scan.candidates)}")
        return [t]
    q = _need_q(a)
    chi = resolve_chi(q, a.chi)
    if a.mode == "fe-check":
        t = Table(["sigma", "t", "residual"])
        for sg in np.linspace(0.1, 0.9, 5):
            for tv in np.linspace(-20, 20, 4):
                t.add(sg, tv, lfunc.functional_equation_residual(complex(sg, tv), chi))
        return [t]
    if a.method == "hurwitz":
        ev = lfunc.HurwitzEvaluator(chi)
    else:
        N = parse_int(a.n)
        state = sample_state(q, a.m, N, a.seed) if a.method == "euler-random" else None
        ev = lfunc.euler_evaluator(chi, N, store_for(N), state)
    scan = lfunc.scan_line(ev, a.sigma, (a.t0, a.t1), a.step)
    t = Table(["t", "absL"])
    for tv, v in zip(scan.t, scan.values):
        t.add(tv, v)
    t.notes.append("minima below 0.05: " + " ".join(fmt(m[0]) for m in scan.minima))
    return [t]


def cmd_stats(a):
    q = _need_q(a)
    N = parse_int(a.n)
    if a.mode in ("los", "markov") or (a.mode == "trans" and a.chi is None):
        source = q if a.chi is None else resolve_chi(q, a.chi)
    else:
        source = resolve_chi(q, a.chi)
    if a.mode == "freq":
        store = store_for(N)
        f = rs.frequencies(source, N, store)
        t = Table(["label", "count", "probability"])
        for lab, c, p in zip(f.labels, f.counts, f.probs):
            t.add(lab, c, p)
        return [t]
    if a.mode == "window":
        ell = parse_int(a.ell)
        store = store_for(ell + N)
        f = rs.windowed_frequencies(source, ell, N, store)
        t = Table(["label", "count", "probability"])
        for lab, c, p in zip(f.labels, f.counts, f.probs):
            t.add(lab, c, p)
        return [t]
    if a.mode == "trans":
        m = rs.transition_matrix(source, a.k, N, store_for(N))
        t = Table(["a", "b", "count", "probability"])
        for i, la in enumerate(m.labels):
            for j, lb in enumerate(m.labels):
                t.add(la, lb, m.counts[i, j], m.probs[i, j])
        return [t]
    if a.mode == "markov":
        res, (i, j) = rs.markov_residual(source, a.k, N, store_for(N))
        t = Table(["k", "N", "residual", "row", "col"])
        t.add(a.k, N, res, i + 1, j + 1)
        return [t]
    if a.mode == "los":
        cmp = rs.los_compare(q, a.k, N, store_for(N + a.k))
        t = Table(["a", "b", "empirical", "predicted", "difference"])
        for i, ra in enumerate(cmp.residues):
            for j, rb in enumerate(cmp.residues):
                t.add(ra, rb, cmp.empirical[i, j], cmp.predicted[i, j], cmp.difference[i, j])
        t.notes.append(f"x = {cmp.x}, band (log x)^-7/4 = {fmt(cmp.band)}")
        return [t]
    series = rs.cosine_series(source, N, store_for(N))
    corr = rs.autocorrelation(series, a.max_lag)
    if a.mode == "acf":
        t = Table(["j", "C"])
        for j, c in enumerate(corr):
            t.add(j, c)
        return [t]
    spec = rs.spectral_density(corr)
    t = Table(["k", "F"])
    for k, v in enumerate(spec):
        t.add(k, v)
    return [t]


def _parse_gap(text):
    kind, _, rest = text.partition(":")
    if kind == "fixed":
        return int(rest or 800), None
    if kind == "random":
        lo, hi = rest.split(":") if rest else ("400", "1200")
        return 800, (int(lo), int(hi))
    raise UsageError("--gap must be fixed:D or random:LO:HI")


def _parse_range(text):
    lo, hi, step = (parse_int(x) for x in text.split(":"))
    return list(range(lo, hi + 1, step))


def cmd_blocks(a):
    q = _need_q(a)
    chi = resolve_chi(q, a.chi)
    n1, n2 = parse_int(a.n1), parse_int(a.n2)
    D, gap_range = _parse_gap(a.gap)
    store = store_for(n2)
    prefix = be.CosinePrefix(chi, store, n2)
    N_list = _parse_range(a.n_list)
    summary = Table(["N", "M", "mean", "var", "second_moment_tilde", "predicted_var"], name="summary")
    tables = []
    for N in N_list:
        ens = be.build_ensemble(be.EnsembleSpec(chi, n1, n2, N, D, gap_range, a.seed), store, prefix)
        if a.per_block:
            t = Table(["ell", "C", "Ctilde", "Ctilde_end"], name=f"N{N}")
            for ell, c, ct, ce in zip(ens.starts, ens.C, ens.C_tilde, ens.C_tilde_end):
                t.add(ell, c, ct, ce)
            tables.append(t)
        pred = float(np.mean(ens.b2 * (N * ens.lam + ens.rho)))
        summary.add(N, ens.M, float(np.mean(ens.C)), float(np.var(ens.C)), ens.second_moment(), pred)
    fit = linfit(np.array(N_list, float), np.array([r[4] for r in summary.rows]))
    summary.notes.append(f"slope-fit slope,intercept,stderr = {fmt(fit.slope)},{fmt(fit.intercept)},{fmt(fit.stderr)}")
    return [summary] + tables


def cmd_kac(a):
    N = parse_int(a.n)
    if a.mode == "hist":
        fr = kac.frequency_set(a.kind, N, store_for(N) if a.kind == "log-primes" else None)
        fit = kac.kac_histogram(fr, a.T, a.samples, a.seed)
        t = Table(["bin_lo", "bin_hi", "count"])
        h = fit.histogram
        for lo, hi, c in zip(h.edges[:-1], h.edges[1:], h.counts):
            t.add(lo, hi, c)
        t.notes.append(f"fit mean,std,ks = {fmt(fit.mean)},{fmt(fit.std)},{fmt(fit.ks)}")
        return [t]
    kind = {"independent-irrationals": "golden"}.get(a.kind, a.kind)
    w = kac.weyl_sum(kind, N, a.m, store_for(N) if kind == "log-primes" else None)
    t = Table(["n", "magnitude"])
    for n in range(a.stride, N + 1, a.stride):
        t.add(n, w[n - 1])
    return [t]


# ---------------------------------------------------------------- repro

W = np.exp(1j * np.pi / 3)
ROWS = {  # value rows chi(1..q) keyed by (q, label) in the labelling the repro targets use
    (3, 2): [1, -1, 0],
    (5, 2): [1, 1j, -1j, -1, 0], (5, 3): [1, -1, -1, 1, 0], (5, 4): [1, -1j, 1j, -1, 0],
    (7, 2): [1, W**2, W, -W, -W**2, -1, 0], (7, 3): [1, -W, W**2, W**2, -W, 1, 0],
    (7, 4): [1, 1, -1, 1, -1, -1, 0], (7, 5): [1, W**2, -W, -W, W**2, 1, 0],
    (7, 6): [1, -W, -W**2, W**2, W, -1, 0],
}


def reference_chi(q, j):
    return find_character(q, ROWS[(q, j)])


def _repro_freq(j, cols):
    chi = reference_chi(7, j)
    store = store_for(max(cols))
    t = Table(["N", "label", "probability"])
    for N in cols:
        f = rs.frequencies(chi, N, store)
        for lab, p in zip(f.labels, f.probs):
            t.add(N, lab, p)
    return t


def _repro_blocks(q, step, seed):
    store = store_for(10**7)
    t = Table(["label", "N", "second_moment_tilde"])
    for j in range(2, q):
        chi = reference_chi(q, j)
        tpl = be.EnsembleSpec(chi, 10**5, 10**7, 1000, 800, (400, 1200) if seed is not None else None,
                              seed or 0)
        r = be.variance_regression(chi, range(1000, 6001, step), tpl, store)
        for N, m in zip(r.N, r.second_moments):
            t.add(j, N, m)
        t.notes.append(f"chi_{j}: slope={fmt(r.slope)} intercept={fmt(r.intercept)} stderr={fmt(r.stderr)}")
    return t


def cmd_repro(a):
    target = a.target
    cols = [parse_int(c) for c in a.col.split(",")] if a.col else [5**k for k in range(3, 9)]
    if target == "table1":
        t = Table(["q", "label", "canonical_j", "angles_over_2pi"])
        for q in (3, 5, 7):
            for j in range(1, q):
                chi = character(q, 1) if j == 1 else reference_chi(q, j)
                t.add(q, j, chi.j, chi_row_text(chi))
        return [t]
    if target == "table2":
        return [_repro_freq(2, cols)]
    if target == "table3":
        return [_repro_freq(3, cols)]
    if target == "table4":
        chi = reference_chi(7, 2)
        store = store_for(8 * 10**5 + 10**4)
        t = Table(["ell", "label", "probability"])
        for ell in range(10**5, 8 * 10**5 + 1, 10**5):
            f = rs.windowed_frequencies(chi, ell, 10**4, store)
            for lab, p in zip(f.labels, f.probs):
                t.add(ell, lab, p)
        return [t]
    if target in ("matrix-p1", "matrix-p6", "fig-matrix"):
        k = 6 if target == "matrix-p6" else 1
        m = rs.transition_matrix(reference_chi(7, 2), k, 5**9, store_for(5**9))
        t = Table(["a", "b", "probability"])
        for i in range(6):
            for j in range(6):
                t.add(m.labels[i], m.labels[j], m.probs[i, j])
        return [t]
    if target in ("table5", "fig-finalfit-q5"):
        return [_repro_blocks(5, 500 if target == "table5" else 250, a.seed)]
    if target in ("table6", "fig-finalfit-q7"):
        return [_repro_blocks(7, 500 if target == "table6" else 250, a.seed)]
    if target == "fig-tipical":
        store = store_for(10**6)
        tr = B_series(reference_chi(7, 2), 0.0, 10**6, store)
        t = Table(["n", "C_n", "sqrt_n"])
        for n in range(100, 10**6 + 1, 100):
            t.add(n, tr.values[n - 1], math.sqrt(n))
        return [t]
    if target == "fig-lpdir":
        chi = reference_chi(3, 2)
        N = 10**6
        store = store_for(N)
        state = sample_state(3, 2, N, a.seed)
        grid = (0.0, 25.0)
        ref = lfunc.scan_line(lfunc.HurwitzEvaluator(chi), 0.5, grid, 0.005)
        rnd = lfunc.euler_evaluator(chi, N, store, state)(ref.t, 0.5)
        match = lfunc.gs_zero_match(chi, state, store)
        t = Table(["t", "absL", "absL_random_product"])
        for tv, x, y in zip(ref.t, ref.values, rnd):
            t.add(tv, x, y)
        t.notes.append("pairs " + " ".join(f"{fmt(p[0])}:{fmt(p[1])}" for p in match.pairs))
        return [t]
    if target == "fig-jumphase":
        chi = reference_chi(7, 2)
        store = store_for(80)
        from .series import angle_sequence
        seq = angle_sequence(chi, store, 80)
        t = Table(["n", "p_n", "label", "angle"])
        for n, (p, lab, ang) in enumerate(zip(seq.primes, seq.labels(), seq.angles("zero_angle")), start=1):
            t.add(n, int(p), lab, ang)
        return [t]
    if target == "fig-symmcurve":
        chi = reference_chi(3, 2)
        store = store_for(10**4)
        from .random_ensemble import _term_table
        tab = _term_table(chi, 100.0, 3, 10**4, store)
        vals = tab[sample_state(3, 3, 10**4, a.seed).offsets, np.arange(10**4)]
        from .stats_core import histogram
        h = histogram(vals, bins=40)
        t = Table(["bin_lo", "bin_hi", "count"])
        for lo, hi, c in zip(h.edges[:-1], h.edges[1:], h.counts):
            t.add(lo, hi, c)
        return [t]
    if target == "fig-bsequence":
        chi = reference_chi(3, 2)
        store = store_for(10**4)
        from .random_ensemble import B_prime_series
        st = sample_state(3, 3, 10**4, a.seed)
        tr = B_prime_series(st, chi, a.t, store)
        terms = np.diff(np.concatenate([[0.0], tr.values]))
        t = Table(["n", "b_prime_n"])
        for n, v in enumerate(terms, start=1):
            t.add(n, v)
        return [t]
    if target == "fig-clt-dir":
        rep = clt_experiment(reference_chi(3, 2), 100.0, 3, 10**4, 20000, a.seed, store_for(10**4))
        from .stats_core import histogram
        h = histogram(rep.samples)
        t = Table(["bin_lo", "bin_hi", "count"])
        for lo, hi, c in zip(h.edges[:-1], h.edges[1:], h.counts):
            t.add(lo, hi, c)
        t.notes.append(f"fit mean,std = {fmt(rep.mean)},{fmt(rep.std)}")
        return [t]
    if target in ("fig-corrlag", "fig-spectral"):
        N = 5 * 10**5
        corr = rs.autocorrelation(rs.cosine_series(reference_chi(7, 2), N, store_for(N)), 2500)
        if target == "fig-corrlag":
            t = Table(["j", "C"])
            for j, c in enumerate(corr[:1001]):
                t.add(j, c)
            return [t]
        t = Table(["k", "F"])
        for k, v in enumerate(rs.spectral_density(corr)):
            t.add(k, v)
        return [t]
    if target == "fig-clt1":
        N, D, M = 6000, 100, 10**4
        n2 = 10**5 + M * (N + D)
        store = sieve_count(n2)
        ens = be.build_ensemble(be.EnsembleSpec(reference_chi(7, 2), 10**5, n2, N, D), store)
        fit = be.normality_fit(ens.normalized)
        from .stats_core import histogram
        h = histogram(ens.normalized)
        t = Table(["bin_lo", "bin_hi", "count"])
        for lo, hi, c in zip(h.edges[:-1], h.edges[1:], h.counts):
            t.add(lo, hi, c)
        t.notes.append(f"fit mean,std,ks = {fmt(fit.mean)},{fmt(fit.std)},{fmt(fit.ks)}")
        return [t]
    if target == "fig-kac":
        fit = kac.kac_histogram(kac.frequency_set("independent-irrationals", 1000), 1e5, 20000, a.seed)
        t = Table(["bin_lo", "bin_hi", "count"])
        h = fit.histogram
        for lo, hi, c in zip(h.edges[:-1], h.edges[1:], h.counts):
            t.add(lo, hi, c)
        t.notes.append(f"fit mean,std,ks = {fmt(fit.mean)},{fmt(fit.std)},{fmt(fit.ks)}")
        return [t]
    raise UsageError(f"unknown repro target {target!r}; choose from {', '.join(REPRO_TARGETS)}")


REPRO_TARGETS = ["table1", "table2", "table3", "table4", "table5", "table6", "matrix-p1", "matrix-p6",
                 "fig-tipical", "fig-lpdir", "fig-symmcurve", "fig-jumphase", "fig-bsequence",
                 "fig-matrix", "fig-clt-dir", "fig-spectral", "fig-corrlag", "fig-finalfit-q5",
                 "fig-finalfit-q7", "fig-clt1", "fig-kac"]


def _need_q(a):
    if getattr(a, "q", None) is None:
        raise UsageError(f"{a.command}: --q is required")
    return a.q


# ---------------------------------------------------------------- parser

def build_parser():
    p = _Parser(prog="primewalk", description=__doc__)
    p.add_argument("--version", action="version", version=f"primewalk {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", help="output CSV path (default: stdout)")
        sp.add_argument("--threads", type=int, default=None, help="parallelism cap; results do not depend on it")
        sp.add_argument("--plot-script", help="also write a gnuplot-style script for the CSV")
        return sp

    sp = common(sub.add_parser("primes", help="list primes up to a limit"))
    sp.add_argument("--limit", required=True)
    sp.add_argument("--count-only", action="store_true")

    sp = common(sub.add_parser("chars", help="Dirichlet characters mod q"))
    sp.add_argument("--q", type=int)
    sp.add_argument("--table", action="store_true")

    sp = common(sub.add_parser("series", help="walk B_n(t) or growth exponents"))
    sp.add_argument("mode", nargs="?", choices=["trace", "exponent"], default="trace")
    sp.add_argument("--q", type=int)
    sp.add_argument("--chi")
    sp.add_argument("--t", type=float, default=0.0)
    sp.add_argument("--n", default="1e6")
    sp.add_argument("--stride", type=int, default=1)
    sp.add_argument("--t-list", default="0,1,15,100")

    sp = common(sub.add_parser("ensemble", help="random-prime CLT experiment"))
    sp.add_argument("mode", choices=["clt"])
    sp.add_argument("--q", type=int)
    sp.add_argument("--chi")
    sp.add_argument("--t", type=float, default=100.0)
    sp.add_argument("--m", type=int, default=3)
    sp.add_argument("--n", default="1e4")
    sp.add_argument("--states", type=int, default=20000)
    sp.add_argument("--seed", type=int, default=0)

    sp = common(sub.add_parser("lfunc", help="L-function scans and checks"))
    sp.add_argument("mode", choices=["scan", "fe-check", "chernoff"])
    sp.add_argument("--q", type=int)
    sp.add_argument("--chi")
    sp.add_argument("--sigma", type=float, default=0.5)
    sp.add_argument("--t0", type=float, default=0.0)
    sp.add_argument("--t1", type=float, default=25.0)
    sp.add_argument("--step", type=float, default=0.005)
    sp.add_argument("--method", choices=["hurwitz", "euler", "euler-random"], default="hurwitz")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--n", default="1e6")

    sp = common(sub.add_parser("stats", help="residue statistics"))
    sp.add_argument("mode", choices=["freq", "window", "trans", "markov", "los", "acf", "spectrum"])
    sp.add_argument("--q", type=int)
    sp.add_argument("--chi")
    sp.add_argument("--n", default="5^8")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--ell", default="1")
    sp.add_argument("--max-lag", type=int, default=1000)

    sp = common(sub.add_parser("blocks", help="block-ensemble variance law"))
    sp.add_argument("--q", type=int)
    sp.add_argument("--chi")
    sp.add_argument("--n1", default="1e5")
    sp.add_argument("--n2", default="1e7")
    sp.add_argument("--n-list", default="1000:6000:250")
    sp.add_argument("--gap", default="fixed:800")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--per-block", action="store_true", help="also write ell,C,Ctilde per N")

    sp = common(sub.add_parser("kac", help="Kac histogram and Weyl sums"))
    sp.add_argument("mode", choices=["hist", "weyl"])
    sp.add_argument("--kind", default="independent-irrationals",
                    choices=["independent-irrationals", "log-integers", "log-primes", "golden"])
    sp.add_argument("--n", default="1000")
    sp.add_argument("--T", type=float, default=1e5)
    sp.add_argument("--samples", type=int, default=20000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--stride", type=int, default=1)

    sp = common(sub.add_parser("repro", help="regenerate a reference table or figure"))
    sp.add_argument("target", choices=REPRO_TARGETS)
    sp.add_argument("--col", help="column list for table2/table3, e.g. 5^8 or 5^3,5^4")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--t", type=float, default=0.0)
    return p


COMMANDS = {"primes": cmd_primes, "chars": cmd_chars, "series": cmd_series, "ensemble": cmd_ensemble,
            "lfunc": cmd_lfunc, "stats": cmd_stats, "blocks": cmd_blocks, "kac": cmd_kac,
            "repro": cmd_repro}


def manifest(args, argv, outputs):
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "plot_script", "command")}
    return [
        f"primewalk {__version__}",
        f"subcommand: {args.command}",
        f"params: {json.dumps(params, sort_keys=True, default=str)}",
        f"seed: {params.get('seed')}",
        f"outputs: {', '.join(outputs) if outputs else 'stdout'}",
        f"timestamp: {datetime.now(timezone.utc).isoformat(timespec='seconds')}",
    ]


def _out_path(base, table, index):
    if index == 0 or base is None:
        return base
    stem, dot, ext = base.rpartition(".")
    suffix = table.name or str(index)
    return f"{stem}_{suffix}.{ext}" if dot else f"{base}_{suffix}"


def _plot_script(path, csv_path, columns):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("set datafile separator ','\nset key autotitle columnhead\n")
        fh.write(f"plot '{csv_path}' using 1:2 with lines\n" if len(columns) > 1 else "")


def run(argv):
    """Parse ``argv``, run the subcommand, write CSV. Returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage())
        tables = COMMANDS[args.command](args)
    except UsageError as e:
        sys.stderr.write(str(e).rstrip() + "\n")
        return 1
    except DomainError as e:
        sys.stderr.write(f"domain error: {e}\n")
        return 2
    except ResourceError as e:
        sys.stderr.write(f"resource error: {e}\n")
        return 3
    paths = [_out_path(args.out, t, i) for i, t in enumerate(tables)]
    head = manifest(args, argv, [p for p in paths if p])
    for t, path in zip(tables, paths):
        text = t.render(head)
        if path is None:
            sys.stdout.write(text)
        else:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    if args.plot_script and paths[0]:
        _plot_script(args.plot_script, paths[0], tables[0].columns)
    return 0


def main(argv=None):
    return run(sys.argv[1:] if argv is None else argv)
