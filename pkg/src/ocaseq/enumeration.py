"""Exhaustive rule-pair searches with sharding and checkpoints.

Two searches live here.  The bipermutive search visits every ordered
pair of bipermutive rules of a diameter, keeps the pairs whose joint
update permutes the state space, and records each kept pair's full
cycle decomposition.  The linear enumeration visits every ordered pair
of rule polynomials, counts the coprime pairs, and keeps those whose
Sylvester matrix has the maximal order 2^(2n) - 1, verified with one
squaring chain plus a non-identity check at each prime cofactor of
2^(2n) - 1.

Maximality is NOT symmetric under swapping the two polynomials (the
band matrix of (q, p) is generally not conjugate to that of (p, q)),
so the reports carry both the ordered count over all orientations and
the canonical count over pairs taken with the smaller mask first; the
canonical count is the one comparable to the published tables.

Both searches run over a statically partitioned pair-index space, so
they can be sharded across worker processes and checkpointed; shard
results merge associatively and the shard count never changes a
report.
"""

from __future__ import annotations

import json
import os
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import ca, gf2
from .dynsys import cycle_lengths

_G_CHUNK = 8192        # g-rules per bijectivity batch in the search
_SEARCH_CKPT_ROWS = 64
_LIN_CHUNK = 4096      # pair indices per batch in the linear enumeration

_CSV_HEADER = ["diameter", "poly_f", "poly_g", "rule_f", "rule_g", "order"]


class _Interrupted(RuntimeError):
    """Raised by workers when a test-only interruption point triggers."""


# ----------------------------------------------------------------------
# reports
# ----------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class SearchReport:
    """Outcome of the exhaustive bipermutive-pair search for one diameter."""

    diameter: int
    total_pairs: int
    oca_pairs: int
    max_cycle_histogram: tuple[tuple[int, int], ...]
    maximal_pairs: tuple[tuple[int, int, str, str], ...]

    def to_json_dict(self) -> dict:
        return {
            "diameter": self.diameter,
            "total_pairs": self.total_pairs,
            "oca_pairs": self.oca_pairs,
            "max_cycle_histogram": {str(k): v for k, v in self.max_cycle_histogram},
            "maximal_pairs": [
                {"rule_f": rf, "rule_g": rg, "linearity_f": lf, "linearity_g": lg}
                for rf, rg, lf, lg in self.maximal_pairs
            ],
        }

    def to_csv_rows(self) -> list[list[str]]:
        order = (1 << (2 * (self.diameter - 1))) - 1
        rows = [list(_CSV_HEADER)]
        for rf, rg, lf, lg in self.maximal_pairs:
            pf = gf2.poly_hex(ca.rule_to_poly(ca.LocalRule(self.diameter, rf))) if lf == ca.LINEAR else ""
            pg = gf2.poly_hex(ca.rule_to_poly(ca.LocalRule(self.diameter, rg))) if lg == ca.LINEAR else ""
            rows.append([str(self.diameter), pf, pg, str(rf), str(rg), str(order)])
        return rows


@dataclass(frozen=True, slots=True)
class LinearEnumReport:
    """Outcome of the maximal-order enumeration over rule polynomials."""

    diameter: int
    loca_ordered: int
    mloca_ordered: int
    mloca_pairs: tuple[tuple[int, int], ...]  # canonical orientation, smaller mask first
    elapsed: float = field(compare=False, default=0.0)

    @property
    def loca_unordered(self) -> int:
        return self.loca_ordered // 2

    @property
    def mloca_unordered(self) -> int:
        return len(self.mloca_pairs)

    def to_json_dict(self) -> dict:
        return {
            "diameter": self.diameter,
            "loca_ordered": self.loca_ordered,
            "loca_unordered": self.loca_unordered,
            "mloca_ordered": self.mloca_ordered,
            "mloca_unordered": self.mloca_unordered,
            "mloca_pairs": [[gf2.poly_hex(p), gf2.poly_hex(q)] for p, q in self.mloca_pairs],
        }

    def to_csv_rows(self) -> list[list[str]]:
        order = (1 << (2 * (self.diameter - 1))) - 1
        rows = [list(_CSV_HEADER)]
        for p, q in self.mloca_pairs:
            rf = ca.poly_to_rule(p, self.diameter).wolfram_code
            rg = ca.poly_to_rule(q, self.diameter).wolfram_code
            rows.append([str(self.diameter), gf2.poly_hex(p), gf2.poly_hex(q),
                         str(rf), str(rg), str(order)])
        return rows


# ----------------------------------------------------------------------
# partitioning and checkpoints
# ----------------------------------------------------------------------

def partition_work(space_size: int, shards: int) -> list[range]:
    """Contiguous, disjoint index ranges covering [0, space_size)."""
    if space_size < 0:
        raise ValueError("space size must be non-negative")
    if shards < 1:
        raise ValueError("shards must be >= 1")
    base, extra = divmod(space_size, shards)
    out = []
    start = 0
    for i in range(shards):
        size = base + (1 if i < extra else 0)
        out.append(range(start, start + size))
        start += size
    return out


def _ckpt_path(directory: str, kind: str, d: int, shards: int, shard: int) -> str:
    return os.path.join(directory, f"{kind}-d{d}-w{shards}-s{shard:04d}.json")


def _load_ckpt(path: str, geometry: dict) -> dict | None:
    if not os.path.exists(path):
        return None
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if any(data.get(k) != v for k, v in geometry.items()):
        print(f"checkpoint {path} does not match this run; starting fresh",
              file=sys.stderr)
        return None
    return data


def _save_ckpt(path: str, payload: dict) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
    os.replace(tmp, path)


# ----------------------------------------------------------------------
# bipermutive search
# ----------------------------------------------------------------------

def _rule_truth_bits(codes: list[int], d: int) -> np.ndarray:
    nbytes = max(1, (1 << d) // 8)
    buf = b"".join(c.to_bytes(nbytes, "little") for c in codes)
    packed = np.frombuffer(buf, dtype=np.uint8).reshape(len(codes), nbytes)
    return np.unpackbits(packed, axis=1, bitorder="little")[:, : 1 << d]


def _nbca_tables_bulk(codes: list[int], d: int) -> np.ndarray:
    """Global-map output of every rule on every 2(d-1)-cell state."""
    n = d - 1
    width = 2 * n
    size = 1 << width
    bits = _rule_truth_bits(codes, d)
    states = np.arange(size, dtype=np.uint32)
    mask = (1 << d) - 1
    windows = [((states >> (width - d - i)) & mask).astype(np.uint16) for i in range(n)]
    out = np.zeros((len(codes), size), dtype=np.uint16)
    chunk = max(1, (1 << 22) // size)
    for lo in range(0, len(codes), chunk):
        hi = min(len(codes), lo + chunk)
        block = np.zeros((hi - lo, size), dtype=np.uint16)
        for win in windows:
            block = (block << 1) | bits[lo:hi, win]
        out[lo:hi] = block
    return out


def _search_shard(args: dict) -> dict:
    d = args["diameter"]
    start, stop = args["start"], args["stop"]
    ckpt = None
    if args.get("checkpoint_dir"):
        ckpt = _ckpt_path(args["checkpoint_dir"], "search", d, args["shards"], args["shard"])
    interrupt_after = args.get("interrupt_after_rows")

    codes = ca._bipermutive_tables(d)
    B = len(codes)
    n = d - 1
    size = 1 << (2 * n)
    tables = _nbca_tables_bulk(codes, d)

    geometry = {"kind": "search", "diameter": d, "shards": args["shards"],
                "shard": args["shard"], "start": start, "stop": stop}
    state = _load_ckpt(ckpt, geometry) if ckpt else None
    if state is None:
        state = dict(geometry, next=start, oca_pairs=0, histogram={}, maximal=[])
    pos = state["next"]
    oca = state["oca_pairs"]
    histogram = Counter({int(k): v for k, v in state["histogram"].items()})
    maximal = [tuple(entry) for entry in state["maximal"]]

    def save(next_pos: int) -> None:
        if ckpt:
            _save_ckpt(ckpt, dict(geometry, next=next_pos, oca_pairs=oca,
                                  histogram={str(k): v for k, v in sorted(histogram.items())},
                                  maximal=[list(entry) for entry in maximal]))

    linearity = {}

    def classify(code: int) -> str:
        if code not in linearity:
            linearity[code] = ca.classify_linearity(ca.LocalRule(d, code))
        return linearity[code]

    rows_done = 0
    while pos < stop:
        f_idx, g_lo = divmod(pos, B)
        g_hi = min(B, g_lo + (stop - pos))
        f_shifted = tables[f_idx].astype(np.uint16) << n
        for c_lo in range(g_lo, g_hi, _G_CHUNK):
            c_hi = min(g_hi, c_lo + _G_CHUNK)
            h = f_shifted[None, :] | tables[c_lo:c_hi]
            rows = c_hi - c_lo
            hit = np.zeros((rows, size), dtype=bool)
            hit[np.arange(rows)[:, None], h] = True
            for rel in np.flatnonzero(hit.all(axis=1)):
                g_idx = c_lo + int(rel)
                lengths = cycle_lengths(h[rel].tolist())
                oca += 1
                longest = max(lengths)
                histogram[longest] += 1
                if longest == size - 1:
                    maximal.append((codes[f_idx], codes[g_idx],
                                    classify(codes[f_idx]), classify(codes[g_idx])))
        pos = f_idx * B + g_hi
        rows_done += 1
        if rows_done % _SEARCH_CKPT_ROWS == 0:
            save(pos)
        if interrupt_after is not None and rows_done >= interrupt_after and pos < stop:
            save(pos)
            raise _Interrupted(f"search shard stopped after {rows_done} rows")
    save(pos)
    return {"oca_pairs": oca,
            "histogram": dict(histogram),
            "maximal": maximal}


def search_bipermutive(d: int, *, allow_long: bool = False, threads: int = 1,
                       checkpoint_dir: str | None = None) -> SearchReport:
    """Test every ordered pair of bipermutive rules of diameter d.

    Diameter 6 means ~4.3e9 pairs and hours of compute, so it has to be
    requested explicitly; use checkpoint_dir to make it resumable.
    """
    if not 2 <= d <= 6:
        raise ValueError("search diameter out of range (2..5, or 6 with allow_long)")
    if d == 6 and not allow_long:
        raise ValueError("diameter 6 is a multi-hour run; pass allow_long to confirm")
    if threads < 1:
        raise ValueError("threads must be >= 1")
    if checkpoint_dir:
        os.makedirs(checkpoint_dir, exist_ok=True)

    B = len(ca._bipermutive_tables(d))
    total = B * B
    ranges = partition_work(total, threads)
    arg_list = [{"diameter": d, "shards": threads, "shard": i,
                 "start": r.start, "stop": r.stop, "checkpoint_dir": checkpoint_dir}
                for i, r in enumerate(ranges)]
    if threads == 1:
        partials = [_search_shard(arg_list[0])]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(_search_shard, arg_list))

    histogram: Counter = Counter()
    maximal: list[tuple[int, int, str, str]] = []
    oca = 0
    for part in partials:
        oca += part["oca_pairs"]
        histogram.update(part["histogram"])
        maximal.extend(tuple(entry) for entry in part["maximal"])
    return SearchReport(diameter=d, total_pairs=total, oca_pairs=oca,
                        max_cycle_histogram=tuple(sorted(histogram.items())),
                        maximal_pairs=tuple(maximal))


# ----------------------------------------------------------------------
# linear enumeration
# ----------------------------------------------------------------------

def rule_polynomials(d: int) -> list[int]:
    """All monic degree-(d-1) masks with nonzero constant term, ascending."""
    if d < 3:
        raise ValueError("linear enumeration needs diameter >= 3")
    if d > ca.MAX_DIAMETER:
        raise ValueError(f"diameter must be at most {ca.MAX_DIAMETER}")
    n = d - 1
    return [1 | (mid << 1) | (1 << n) for mid in range(1 << (n - 1))]


def enumerate_linear_pairs(d: int) -> Iterator[tuple[int, int]]:
    """Ordered pairs of rule polynomials for diameter d."""
    polys = rule_polynomials(d)
    for p in polys:
        for q in polys:
            yield p, q


def _linear_shard(args: dict) -> dict:
    d = args["diameter"]
    start, stop = args["start"], args["stop"]
    ckpt = None
    if args.get("checkpoint_dir"):
        ckpt = _ckpt_path(args["checkpoint_dir"], "enumlin", d, args["shards"], args["shard"])
    interrupt_after = args.get("interrupt_after_chunks")

    n = d - 1
    k = 2 * n
    polys = rule_polynomials(d)
    P = len(polys)
    t = (1 << k) - 1
    cofactors = [t // p for p in sorted(set(gf2.factorize(t)))]
    ident = gf2._identity_rows(k)

    geometry = {"kind": "enumlin", "diameter": d, "shards": args["shards"],
                "shard": args["shard"], "start": start, "stop": stop}
    state = _load_ckpt(ckpt, geometry) if ckpt else None
    if state is None:
        state = dict(geometry, next=start, loca_ordered=0, mloca_ordered=0, canonical=[])
    pos = state["next"]
    loca = state["loca_ordered"]
    mloca = state["mloca_ordered"]
    canonical = [tuple(pair) for pair in state["canonical"]]

    def save(next_pos: int) -> None:
        if ckpt:
            _save_ckpt(ckpt, dict(geometry, next=next_pos, loca_ordered=loca,
                                  mloca_ordered=mloca,
                                  canonical=[list(pair) for pair in canonical]))

    mul = gf2._mul_rows
    chunks_done = 0
    while pos < stop:
        end = min(stop, pos + _LIN_CHUNK)
        for idx in range(pos, end):
            i, j = divmod(idx, P)
            p, q = polys[i], polys[j]
            if gf2._gcd_raw(p, q) != 1:
                continue
            loca += 1
            rows = tuple(p << s for s in range(n)) + tuple(q << s for s in range(n))
            chain = [rows]
            for _ in range(k):
                chain.append(mul(chain[-1], chain[-1]))
            # m^(2^k) == m  <=>  m^(2^k - 1) == I for invertible m
            if chain[k] != rows:
                continue
            if any(gf2._pow_with_chain(chain, c, k) == ident for c in cofactors):
                continue
            mloca += 1
            if i < j:
                canonical.append((p, q))
        pos = end
        chunks_done += 1
        if ckpt:
            save(pos)
        if interrupt_after is not None and chunks_done >= interrupt_after and pos < stop:
            save(pos)
            raise _Interrupted(f"linear shard stopped after {chunks_done} chunks")
    save(pos)
    return {"loca_ordered": loca, "mloca_ordered": mloca, "canonical": canonical}


def enumerate_maximal_linear(d: int, *, threads: int = 1,
                             checkpoint_dir: str | None = None) -> LinearEnumReport:
    """Count coprime polynomial pairs and keep the maximal-order ones."""
    polys = rule_polynomials(d)  # validates d
    if threads < 1:
        raise ValueError("threads must be >= 1")
    if checkpoint_dir:
        os.makedirs(checkpoint_dir, exist_ok=True)

    started = time.perf_counter()
    total = len(polys) ** 2
    ranges = partition_work(total, threads)
    arg_list = [{"diameter": d, "shards": threads, "shard": i,
                 "start": r.start, "stop": r.stop, "checkpoint_dir": checkpoint_dir}
                for i, r in enumerate(ranges)]
    if threads == 1:
        partials = [_linear_shard(arg_list[0])]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(_linear_shard, arg_list))

    loca = sum(part["loca_ordered"] for part in partials)
    mloca = sum(part["mloca_ordered"] for part in partials)
    canonical: list[tuple[int, int]] = []
    for part in partials:
        canonical.extend(tuple(pair) for pair in part["canonical"])
    return LinearEnumReport(diameter=d, loca_ordered=loca, mloca_ordered=mloca,
                            mloca_pairs=tuple(canonical),
                            elapsed=time.perf_counter() - started)
