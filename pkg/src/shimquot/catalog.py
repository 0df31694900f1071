"""Catalog records, the analysis pipeline and regression checks."""

from __future__ import annotations

import json
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .atkin_lehner import subgroup
from .cm import CMReport, QuotientMap, cm_report
from .curves import CurveId, CurveModel, RatPoint, parse_model
from .local import LocalReport, everywhere_locally_solvable
from .points import DEFAULT_HEIGHT, Verdict, verdict

ENV_VAR = "SHIMQUOT_CATALOG"


class CatalogError(ValueError):
    pass


@dataclass
class CatalogRecord:
    id: CurveId
    genus: int
    expected_n: int | str
    model: CurveModel | None = None
    expected_points: list[RatPoint] | None = None
    cm_labels: list[dict] | None = None
    rank: int | None = None
    rank_source: str | None = None
    hasse_violation: bool = False
    quotient_map: QuotientMap | None = None
    map_data: dict | None = None
    provenance: dict = field(default_factory=dict)

    @property
    def key(self) -> str:
        return self.id.key

    def to_json(self) -> dict:
        return {
            "id": self.key,
            "genus": self.genus,
            "expected_n": self.expected_n,
            "model": self.model.to_json() if self.model else None,
            "expected_points": None if self.expected_points is None else [str(P) for P in self.expected_points],
            "cm_labels": self.cm_labels,
            "rank": self.rank,
            "rank_source": self.rank_source,
            "hasse_violation": self.hasse_violation,
            "quotient_map": self.map_data,
            "provenance": self.provenance,
        }


def _record_from_json(raw: dict, D: int, N: int) -> CatalogRecord:
    key = raw.get("id", "?")
    try:
        cid = CurveId.parse(key)
        if (cid.D, cid.N) != (D, N):
            raise CatalogError(f"record {key} filed under ({D},{N})")
        # generators must be the canonical basis of the subgroup they span
        if cid.W and subgroup(D, N, cid.W).generators != cid.W:
            raise CatalogError(f"{key}: generators are not canonical")
        model = None
        if raw.get("model") is not None:
            m = raw["model"]
            model = parse_model(m["h"], m["f"], cid, m.get("kind"))
            if model.genus != raw["genus"]:
                raise CatalogError(f"{key}: model genus {model.genus} but record says {raw['genus']}")
        n = raw["expected_n"]
        if not (n == "inf" or (isinstance(n, int) and n >= 0)):
            raise CatalogError(f"{key}: bad expected_n {n!r}")
        pts = raw.get("expected_points")
        if pts is not None:
            pts = [RatPoint.parse(s) for s in pts]
            if model is not None:
                bad = [str(P) for P in pts if not model.evaluate(P)]
                if bad:
                    raise CatalogError(f"{key}: expected points {bad} are not on the model")
            if n != "inf" and len(pts) != n:
                raise CatalogError(f"{key}: {len(pts)} points listed but n = {n}")
        return CatalogRecord(
            cid, raw["genus"], n, model, pts, raw.get("cm_labels"), raw.get("rank"),
            raw.get("rank_source"), bool(raw.get("hasse_violation", False)), None,
            raw.get("quotient_map"), raw.get("provenance", {}),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, CatalogError):
            raise
        raise CatalogError(f"record {key}: {exc}") from exc


def default_catalog_path() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(str(resources.files(__package__).joinpath("data/catalog")))


def _catalog_files(path: Path) -> list[Path]:
    if path.is_dir():
        return sorted(path.glob("*.json"), key=lambda p: tuple(int(s) for s in p.stem.split(".")))
    return [path]


def load_catalog(path: str | Path | None = None) -> list[CatalogRecord]:
    path = Path(path) if path is not None else default_catalog_path()
    records: list[CatalogRecord] = []
    seen = set()
    for fp in _catalog_files(path):
        blob = json.loads(fp.read_text())
        for raw in blob["records"]:
            rec = _record_from_json(raw, blob["D"], blob["N"])
            if rec.key in seen:
                raise CatalogError(f"duplicate record {rec.key}")
            seen.add(rec.key)
            records.append(rec)
    by_key = {r.key: r for r in records}
    for rec in records:
        md = rec.map_data
        if md is None:
            continue
        src = by_key.get(md["source"])
        if src is None or src.model is None or rec.model is None:
            raise CatalogError(f"{rec.key}: quotient map needs models for itself and {md['source']}")
        rec.quotient_map = QuotientMap(src.model, rec.model, md["X"], md["Y"], md["Z"], md["target_coords"])
    return records


def catalog_blocks(records) -> dict[tuple[int, int], list[CatalogRecord]]:
    out: dict[tuple[int, int], list[CatalogRecord]] = {}
    for r in records:
        out.setdefault((r.id.D, r.id.N), []).append(r)
    return out


def serialize_block(D: int, N: int, records, source: str = "") -> dict:
    return {"D": D, "N": N, "source": source, "records": [r.to_json() for r in records]}


def _dump(obj, indent: int) -> str:
    pad = " " * indent
    if isinstance(obj, dict) and obj:
        items = [f'{pad} {json.dumps(k)}: {_dump(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        items = [f"{pad} {_dump(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    return json.dumps(obj, ensure_ascii=False)


def dumps_block(blob: dict) -> str:
    """JSON text with lists of scalars kept on one line."""
    return _dump(blob, 0) + "\n"


def find_record(key: str, records=None) -> CatalogRecord:
    records = records if records is not None else load_catalog()
    for r in records:
        if r.key == key:
            return r
    raise KeyError(f"no catalog record {key}")


# --- pipeline -------------------------------------------------------------------


@dataclass
class Report:
    key: str
    local: LocalReport | None
    verdict: Verdict
    cm: CMReport | None
    diff: list[str]

    def to_json(self) -> dict:
        return {
            "id": self.key,
            "local": self.local.to_json() if self.local else None,
            "verdict": self.verdict.to_json(),
            "cm": self.cm.to_json() if self.cm else None,
            "diff": self.diff,
        }

    @classmethod
    def from_json(cls, d: dict) -> "Report":
        cm = None
        if d["cm"] is not None:
            cm = CMReport(**d["cm"])
        local = LocalReport.from_json(d["local"]) if d["local"] else None
        return cls(d["id"], local, Verdict.from_json(d["verdict"]), cm, d["diff"])


def _cm_diff(rec: CatalogRecord, cm: CMReport) -> list[str]:
    out = []
    labels = rec.cm_labels or []
    if cm.mode == "fiber":
        got = {p["point"]: p for p in cm.points}
        for lab in labels:
            p = got.get(lab["point"])
            if p is None:
                out.append(f"cm: no classification for {lab['point']}")
                continue
            if p["is_cm"] != lab["is_cm"]:
                out.append(f"cm: {lab['point']} is_cm {p['is_cm']} expected {lab['is_cm']}")
            elif lab["is_cm"] and sorted(p["candidate_fields"]) != sorted(lab["delta_K"]):
                out.append(f"cm: {lab['point']} fields {p['candidate_fields']} expected {lab['delta_K']}")
    else:
        want = Counter(tuple(sorted(set(lab["delta_K"]))) for lab in labels if lab["is_cm"])
        got = Counter({tuple(sorted(k)): v for k, v in cm.field_multiset().items()})
        if want != got:
            out.append(f"cm: field multiset {dict(got)} expected {dict(want)}")
    return out


def run_pipeline(rec: CatalogRecord, H: int = DEFAULT_HEIGHT) -> Report:
    diff: list[str] = []
    local = everywhere_locally_solvable(rec.model) if rec.model is not None else None
    v = verdict(rec, H, local)
    if local is not None:
        finite = rec.expected_n != "inf"
        if finite and rec.expected_n > 0 and not local.everywhere_locally_solvable:
            diff.append("local: not everywhere locally solvable but points are expected")
        if rec.hasse_violation and not local.everywhere_locally_solvable:
            diff.append("local: tabulated Hasse violation fails a local check")
        if finite and v.status != "empty_local":
            if rec.expected_points is not None and set(v.points) != set(rec.expected_points):
                want = {str(P) for P in rec.expected_points}
                got = {str(P) for P in v.points}
                diff.append(f"points: extra {sorted(got - want)} missing {sorted(want - got)}")
            elif len(v.points) != rec.expected_n:
                diff.append(f"points: found {len(v.points)} expected {rec.expected_n}")
    cm = None
    if rec.expected_n != "inf":
        cm = cm_report(rec, v.points if rec.model is not None else None)
        if rec.cm_labels is not None:
            diff += _cm_diff(rec, cm)
    return Report(rec.key, local, v, cm, diff)


def _run_json(args) -> dict:
    rec, H = args
    return run_pipeline(rec, H).to_json()


def verify_all(records=None, jobs: int = 1, H: int = DEFAULT_HEIGHT, path=None) -> tuple[int, list[dict]]:
    """Run every record; returns (exit status, reports in catalog order)."""
    records = records if records is not None else load_catalog(path)
    work = [(r, H) for r in records]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            reports = list(ex.map(_run_json, work, chunksize=8))
    else:
        reports = [_run_json(w) for w in work]
    bad = any(r["diff"] for r in reports)
    return (1 if bad else 0), reports


def diff_table(reports) -> list[tuple[str, str]]:
    return [(r["id"], d) for r in reports for d in r["diff"]]
