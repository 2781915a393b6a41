"""The claim matrix behind ``paper-suite``.

Every claim is a small function returning the computed value plus the
drawing certificates that back it.  Certificates are re-verified before a
claim can pass.  The report is JSON (plus a TSV digest) with one entry per
claim in a fixed order; in deterministic mode runtimes are left out so
that identical inputs give identical bytes.
"""
from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

from .embedder import Unknown
from .families import complete_graph, gen_hamburger, gen_hamburger_plus, gen_hamburger_wide, gen_k5_union
from .graph import Surface, disjoint_union
from .solver import CrossingResult, crossing_number, crossing_sequence
from .verify import verify_certificate


STRETCH_SECONDS = 600.0


class Inconclusive(Exception):
    """A computation ran out of budget or time."""


@dataclass(frozen=True)
class Claim:
    id: str
    statement: str
    expected: object
    tiers: tuple[str, ...]
    run: Callable[[float | None], tuple[object, list[tuple[str, dict]]]]
    inconclusive_allowed: bool = False
    time_limit: float | None = None


def _sequence(g, orientable=True, time_limit=None):
    res = crossing_sequence(g, orientable=orientable, time_limit=time_limit)
    if isinstance(res, Unknown):
        raise Inconclusive(res.reason)
    certs = [(f"{'S' if orientable else 'N'}{h}", r.certificate.to_dict())
             for h, r in enumerate(res.results)]
    return list(res.as_tuple()), certs


def _cross(g, surface, time_limit=None, lower_bound=0):
    res = crossing_number(g, surface, time_limit=time_limit, lower_bound=lower_bound)
    if isinstance(res, Unknown):
        raise Inconclusive(res.reason)
    if not isinstance(res, CrossingResult):
        raise Inconclusive(str(res))
    return res.crossings, res.certificate.to_dict()


def _seq_claim(make, orientable=True):
    def run(limit):
        return _sequence(make(), orientable, limit)
    return run


def _h4(limit):
    g = gen_hamburger(4)
    one, c1 = _cross(g, Surface(True, 1), limit)
    zero, c0 = _cross(g, Surface(True, 0), limit, lower_bound=one + 1)
    return {"cr_1": one, "cr_0": zero}, [("S1", c1), ("S0", c0)]


def _k5_pair(limit):
    k5 = complete_graph(5, "a")
    pair = disjoint_union(complete_graph(5, "a"), complete_graph(5, "b"), tags=("G1", "G2"))
    n1 = Surface(False, 1)
    union, cu = _cross(pair, n1, limit)
    single_n1, cs = _cross(k5, n1, limit)
    single_s0, c0 = _cross(k5, Surface(True, 0), limit)
    combined = min(single_n1 + single_s0, single_s0 + single_n1)
    value = {"union_N1": union, "K5_N1": single_n1, "K5_S0": single_s0, "min_split": combined}
    return value, [("union_N1", cu), ("K5_N1", cs), ("K5_S0", c0)]


def _h5_torus(limit):
    one, c1 = _cross(gen_hamburger(5), Surface(True, 1), limit)
    return one, [("S1", c1)]


CLAIMS: tuple[Claim, ...] = (
    Claim("H3_sequence", "crossing sequence of H_3", [3, 2, 0], ("quick", "full"),
          _seq_claim(lambda: gen_hamburger(3))),
    Claim("K5U2_sequence", "crossing sequence of the K5 union with a=2", [2, 1, 0], ("quick", "full"),
          _seq_claim(lambda: gen_k5_union(2))),
    Claim("K5U3_sequence", "crossing sequence of the K5 union with a=3", [3, 1, 0], ("quick", "full"),
          _seq_claim(lambda: gen_k5_union(3))),
    Claim("K5K5_N1_split", "projective crossing number of K5+K5 against its one-sided splits",
          {"union_N1": 1, "K5_N1": 0, "K5_S0": 1, "min_split": 1}, ("quick", "full"), _k5_pair),
    Claim("H4_low", "cr_1 and cr_0 of H_4", {"cr_1": 2, "cr_0": 4}, ("full",), _h4),
    Claim("H31_sequence", "crossing sequence of H_{3,1}", [4, 2, 0], ("full",),
          _seq_claim(lambda: gen_hamburger_wide(3, 1))),
    Claim("H32_sequence", "crossing sequence of H_{3,2}", [5, 2, 0], ("full",),
          _seq_claim(lambda: gen_hamburger_wide(3, 2))),
    Claim("H3plus_sequence", "crossing sequence of H_3^+", [4, 3, 0], ("full",),
          _seq_claim(gen_hamburger_plus)),
    Claim("H5_torus", "cr_1 of H_5 (stretch run)", 4, ("full",), _h5_torus,
          inconclusive_allowed=True, time_limit=STRETCH_SECONDS),
    Claim("K5U6_sequence", "crossing sequence of the K5 union with a=6 (stretch run)", [6, 1, 0],
          ("full",), _seq_claim(lambda: gen_k5_union(6)), inconclusive_allowed=True, time_limit=STRETCH_SECONDS),
)


def claims_for(tier: str) -> list[Claim]:
    if tier not in ("quick", "full"):
        raise ValueError(f"unknown tier {tier!r}")
    return [c for c in CLAIMS if tier in c.tiers]


def _run_claim(claim: Claim, cert_dir: str | None) -> dict:
    t0 = time.perf_counter()
    entry = {"id": claim.id, "claim": claim.statement, "paper": claim.expected,
             "inconclusive_allowed": claim.inconclusive_allowed}
    try:
        value, certs = claim.run(claim.time_limit)
    except Inconclusive as exc:
        entry.update(computed=None, status="inconclusive", detail=exc.args[0] if exc.args else "",
                     certificates=[])
    else:
        paths, bad = [], []
        for name, cert in certs:
            verdict = verify_certificate(cert)
            if not verdict:
                bad.append(f"{name}: {verdict.reason}")
            if cert_dir is not None:
                path = os.path.join(cert_dir, f"{claim.id}_{name}.json")
                with open(path, "w") as fh:
                    json.dump(cert, fh, indent=1, sort_keys=True)
                paths.append(os.path.relpath(path, os.path.dirname(cert_dir)))
        ok = value == claim.expected and not bad
        entry.update(computed=value, status="pass" if ok else "fail",
                     detail="; ".join(bad) if bad else "", certificates=paths)
    entry["runtime_s"] = round(time.perf_counter() - t0, 3)
    return entry


def _run_claim_star(args):
    return _run_claim(*args)


def run_paper_suite(tier: str = "quick", report: str | None = None, deterministic: bool = True,
                    threads: int = 1, figures: bool = True, only: list[str] | None = None) -> dict:
    """Run the claims of ``tier`` and optionally write the report files.

    With ``report`` set to ``X.json`` the run also writes ``X.tsv`` and a
    directory ``X_files`` holding certificates and SVG figures.  The
    returned dict has ``ok``: False when any claim fails, or when a claim
    is inconclusive in the full tier without being allowed to be.
    """
    todo = claims_for(tier)
    if only:
        todo = [c for c in todo if c.id in only]
    cert_dir = None
    if report is not None:
        cert_dir = os.path.splitext(report)[0] + "_files"
        os.makedirs(cert_dir, exist_ok=True)
    jobs = [(c, cert_dir) for c in todo]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            entries = list(pool.map(_run_claim_star, jobs))
    else:
        entries = [_run_claim(*j) for j in jobs]
    for e in entries:
        if e["status"] == "inconclusive" and e["inconclusive_allowed"]:
            e["status"] = "inconclusive-allowed"
        if deterministic:
            del e["runtime_s"]
    blocking = {"fail"} | ({"inconclusive"} if tier == "full" else set())
    ok = not any(e["status"] in blocking for e in entries)
    doc = {"tier": tier, "ok": ok, "claims": entries,
           "warnings": [e["id"] for e in entries if e["status"] == "inconclusive"]}
    if report is not None:
        if figures:
            doc["figures"] = _figures(entries, cert_dir)
        with open(report, "w") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.write("\n")
        _write_tsv(os.path.splitext(report)[0] + ".tsv", entries)
    return doc


def _write_tsv(path: str, entries: list[dict]):
    cols = ["id", "status", "computed", "paper"] + (["runtime_s"] if entries and "runtime_s" in entries[0] else [])
    with open(path, "w") as fh:
        fh.write("\t".join(cols) + "\n")
        for e in entries:
            fh.write("\t".join(json.dumps(e[c], sort_keys=True) if c in ("computed", "paper") else str(e[c])
                               for c in cols) + "\n")


def _figures(entries: list[dict], cert_dir: str) -> list[str]:
    from .render import render_certificate, render_sequences
    base = os.path.dirname(cert_dir)
    out = []
    rows = [(e["id"].replace("_sequence", ""), e["computed"]) for e in entries
            if e["id"].endswith("_sequence") and isinstance(e["computed"], list)]
    if rows:
        out.append(render_sequences(rows, os.path.join(cert_dir, "sequences.svg")))
    for e in entries:
        for rel in e["certificates"]:
            path = os.path.join(base, rel)
            with open(path) as fh:
                cert = json.load(fh)
            if cert["count"] == 0 and cert["surface"]["genus"] > 0:
                continue
            out.append(render_certificate(cert, os.path.splitext(path)[0] + ".svg"))
    return [os.path.relpath(p, base) for p in out]
