"""Curve tables, the on-disk a_p cache, and the optional curve-database client."""

import csv
import io
import json
import os
import threading
import urllib.error
import urllib.parse
import urllib.request
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .ec import CurveQ, SingularCurveError

CURVE_HEADER = ["label", "isogeny_class", "conductor", "rank", "a1", "a2", "a3", "a4", "a6", "cm_flag"]
REQUIRED = CURVE_HEADER[:-1]

# ec_curvedata-style endpoint; {rank}, {conductor_lo}, {conductor_hi} are filled in.
DEFAULT_URL_TEMPLATE = (
    "https://www.lmfdb.org/api/ec_curvedata/?_format=json&rank={rank}"
    "&conductor={conductor_lo}-{conductor_hi}"
    "&_fields=lmfdb_label,lmfdb_iso,conductor,rank,ainvs,cm"
)


class DataFormatError(ValueError):
    pass


class OfflineError(RuntimeError):
    pass


class CacheConflictError(RuntimeError):
    pass


@dataclass
class CurveDataset:
    source: str
    curves: List[CurveQ]
    provenance: str = ""

    def __post_init__(self):
        seen = set()
        for c in self.curves:
            if c.label in seen:
                raise DataFormatError(f"duplicate label {c.label!r}")
            seen.add(c.label)

    def __len__(self):
        return len(self.curves)

    def __iter__(self):
        return iter(self.curves)

    def by_label(self, label: str) -> CurveQ:
        for c in self.curves:
            if c.label == label:
                return c
        raise KeyError(label)


def _parse_bool(text: str, where: str) -> Optional[bool]:
    t = text.strip().lower()
    if t in ("", "none", "unknown"):
        return None
    if t in ("true", "1", "yes", "t"):
        return True
    if t in ("false", "0", "no", "f"):
        return False
    raise DataFormatError(f"{where}: bad cm_flag {text!r}")


def _parse_int(text: str, name: str, where: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise DataFormatError(f"{where}: malformed integer in column {name}: {text!r}") from None


def curve_from_row(row: Dict[str, str], where: str = "row") -> CurveQ:
    ints = {k: _parse_int(row[k], k, where) for k in REQUIRED if k not in ("label", "isogeny_class")}
    label = row["label"].strip()
    if not label:
        raise DataFormatError(f"{where}: empty label")
    try:
        return CurveQ(
            label=label,
            isogeny_class=row["isogeny_class"].strip(),
            conductor=ints["conductor"],
            rank=ints["rank"],
            coeffs=tuple(ints[k] for k in ("a1", "a2", "a3", "a4", "a6")),
            cm_flag=_parse_bool(row.get("cm_flag") or "", where),
        )
    except (SingularCurveError, ValueError) as e:
        if isinstance(e, DataFormatError):
            raise
        raise DataFormatError(f"{where}: {e}") from None


def parse_curve_text(text: str, source: str = "<string>") -> CurveDataset:
    reader = csv.DictReader(io.StringIO(text))
    missing = [c for c in REQUIRED if c not in (reader.fieldnames or [])]
    if missing:
        raise DataFormatError(f"{source}: missing columns {missing}")
    curves, seen = [], {}
    for row in reader:
        where = f"{source}:{reader.line_num}"
        c = curve_from_row(row, where)
        if c.label in seen:
            raise DataFormatError(f"{where}: duplicate label {c.label!r} (first on line {seen[c.label]})")
        seen[c.label] = reader.line_num
        curves.append(c)
    return CurveDataset(source, curves, provenance=f"file {source}")


def parse_curve_csv(path) -> CurveDataset:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise OSError(f"cannot read curve file {path}: {e}") from e
    return parse_curve_text(text, str(path))


def _cm_text(flag):
    return "" if flag is None else ("true" if flag else "false")


def curve_csv_text(curves) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CURVE_HEADER)
    for c in curves:
        w.writerow([c.label, c.isogeny_class, c.conductor, c.rank, *c.coeffs, _cm_text(c.cm_flag)])
    return buf.getvalue()


def write_curve_csv(dataset, path):
    curves = dataset.curves if isinstance(dataset, CurveDataset) else dataset
    Path(path).write_text(curve_csv_text(curves), encoding="utf-8")


def parse_curve_spec(text: str) -> CurveQ:
    """A curve given inline: a full CSV row, or just ``[a1,a2,a3,a4,a6]``."""
    t = text.strip()
    if t.startswith("["):
        coeffs = [int(v) for v in t.strip("[]").split(",")]
        if len(coeffs) != 5:
            raise DataFormatError(f"need five coefficients in {text!r}")
        return CurveQ(label=t.replace(" ", ""), coeffs=tuple(coeffs))
    fields = next(csv.reader([t]))
    if len(fields) not in (9, 10):
        raise DataFormatError(f"curve row needs 9 or 10 fields, got {len(fields)}: {text!r}")
    return curve_from_row(dict(zip(CURVE_HEADER, fields + [""] * (10 - len(fields)))), "--curve")


# --- database client ---


def curves_from_api_json(payload, where: str = "response") -> List[CurveQ]:
    """Curves from an ec_curvedata-style JSON body: {"data": [{...}, ...]}."""
    if isinstance(payload, (str, bytes)):
        try:
            payload = json.loads(payload)
        except json.JSONDecodeError as e:
            raise DataFormatError(f"{where}: invalid JSON ({e})") from None
    if not isinstance(payload, dict) or not isinstance(payload.get("data"), list):
        raise DataFormatError(f"{where}: expected an object with a 'data' list")
    out = []
    for k, rec in enumerate(payload["data"]):
        try:
            ainvs = rec["ainvs"]
            if isinstance(ainvs, str):
                ainvs = json.loads(ainvs)
            cm = rec.get("cm")
            out.append(
                CurveQ(
                    label=str(rec["lmfdb_label"]),
                    isogeny_class=str(rec["lmfdb_iso"]),
                    conductor=int(rec["conductor"]),
                    rank=int(rec["rank"]),
                    coeffs=tuple(int(v) for v in ainvs),
                    cm_flag=None if cm is None else bool(int(cm)),
                )
            )
        except (KeyError, TypeError, ValueError) as e:
            raise DataFormatError(f"{where}: record {k}: {e!r}") from None
    return out


def fetch_curves(
    rank: int,
    conductor_lo: int,
    conductor_hi: int,
    online: bool = False,
    url_template: str = DEFAULT_URL_TEMPLATE,
    snapshot: Optional[os.PathLike] = None,
    timeout: float = 60.0,
) -> CurveDataset:
    """Query an external curve database; the result is also written to ``snapshot``."""
    if not online:
        raise OfflineError("network access is disabled; pass online=True (--online) or supply a curve CSV with --input")
    url = url_template.format(rank=rank, conductor_lo=conductor_lo, conductor_hi=conductor_hi)
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            body = resp.read()
    except (urllib.error.URLError, OSError) as e:
        raise OSError(f"request to {url} failed: {e}") from e
    curves = curves_from_api_json(body, where=url)
    if not curves:
        warnings.warn(f"query returned no curves: {url}", RuntimeWarning, stacklevel=2)
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    ds = CurveDataset(url, curves, provenance=f"GET {url} at {stamp}")
    if snapshot is not None:
        write_curve_csv(ds, snapshot)
    return ds


# --- a_p cache ---


class TraceCache:
    """Append-only ``label,q,a`` CSV with an in-memory index.

    Writes go through a lock and each record is a single ``write`` of one
    newline-terminated line.
    """

    HEADER = "label,q,a\n"

    def __init__(self, path):
        self.path = Path(path)
        self._index: Dict[Tuple[str, int], int] = {}
        self._lock = threading.Lock()
        if self.path.exists():
            self._load()
        else:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text(self.HEADER, encoding="utf-8")

    def _load(self):
        with open(self.path, encoding="utf-8") as fh:
            first = fh.readline()
            if first and first != self.HEADER:
                raise DataFormatError(f"{self.path}: bad cache header {first!r}")
            for lineno, line in enumerate(fh, start=2):
                if not line.endswith("\n"):
                    # torn trailing write; ignore the fragment
                    break
                label, q, a = line.rstrip("\n").rsplit(",", 2)
                self._insert(label, int(q), int(a), f"{self.path}:{lineno}")

    def _insert(self, label, q, a, where="put"):
        if a * a > 4 * q:
            raise DataFormatError(f"{where}: a={a} violates a^2 <= 4q at q={q}")
        key = (label, q)
        old = self._index.get(key)
        if old is not None and old != a:
            raise CacheConflictError(f"{where}: conflicting a for {key}: stored {old}, new {a}")
        self._index[key] = a
        return old is None

    def __len__(self):
        return len(self._index)

    def __contains__(self, key):
        return key in self._index

    def get(self, label: str, q: int) -> Optional[int]:
        return self._index.get((label, int(q)))

    def put(self, label: str, q: int, a: int):
        self.put_many(label, [(q, a)])

    def put_many(self, label: str, items):
        if "\n" in label:
            raise ValueError("labels may not contain newlines")
        with self._lock:
            lines = []
            for q, a in items:
                if self._insert(label, int(q), int(a)):
                    lines.append(f"{label},{int(q)},{int(a)}\n")
            if lines:
                with open(self.path, "a", encoding="utf-8") as fh:
                    for line in lines:
                        fh.write(line)

    def compact(self):
        """Rewrite the file with one row per key, sorted."""
        with self._lock:
            tmp = self.path.with_suffix(self.path.suffix + ".tmp")
            with open(tmp, "w", encoding="utf-8") as fh:
                fh.write(self.HEADER)
                for (label, q), a in sorted(self._index.items()):
                    fh.write(f"{label},{q},{a}\n")
            os.replace(tmp, self.path)


def cache_get(cache: TraceCache, label: str, q: int):
    return cache.get(label, q)


def cache_put(cache: TraceCache, label: str, q: int, a: int):
    cache.put(label, q, a)
