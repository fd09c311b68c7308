"""Published coefficient tables: loading, verification and regeneration.

The fixture file is plain CSV so every transcribed number can be diffed
against its printed source.  Lines starting with ``# table:`` open a new
table section; every following row belongs to that table until the next
marker.  Columns::

    source,n,kind,expansion,bw,m1,t,binding,coeffs,claimed_psl_db,corrected_psl_db

``coeffs`` is space separated, ordered T1..Tt (position 1 abuts the
passband).  Independent bandpass rows list their ``2t`` values in ascending
frequency.  ``claimed_psl_db`` is the PSL a source printed, kept verbatim
even when wrong; ``corrected_psl_db`` is the PSL those coefficients really
give.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .core import FilterSpec
from .errors import ArityMismatch, FsfError, ParseError, UnknownPreset
from .optimizer import SolveOptions, optimize
from .response import DEFAULT_G, psl

SOURCES = ("this-paper-optimal", "rabiner", "lyons", "rorabaugh", "rybka")
OPTIMAL = "this-paper-optimal"
COLUMNS = ("source", "n", "kind", "expansion", "bw", "m1", "t", "binding",
           "coeffs", "claimed_psl_db", "corrected_psl_db")

PRESETS = {
    "comparative": "single-coefficient lowpass designs with published competitors",
    "lpf-cos-12": "lowpass, cosine expansion, one and two transition coefficients",
    "lpf-cos-3t": "lowpass, cosine expansion, three transition coefficients",
    "lpf-cos-4t": "lowpass, cosine expansion, four transition coefficients",
    "lpf-sin-12": "lowpass, sine expansion, one and two transition coefficients",
    "lpf-sin-3t": "lowpass, sine expansion, three transition coefficients",
    "bpf-cos": "bandpass, cosine expansion, up to three transition coefficients",
    "text": "individual designs quoted outside the tables",
}

# claimed and recomputed PSLs further apart than this are struck through
STRIKE_DB = 0.05


def psl_tolerance(psl_db: float) -> float:
    """Acceptance band for a PSL, in dB; looser for very deep stopbands."""
    return 0.1 if psl_db < -150.0 else 0.02


def coefficient_tolerance(spec: FilterSpec) -> float:
    return 1e-5 if spec.t == 1 else 5e-5


@dataclass(frozen=True)
class PublishedFixture:
    source: str
    spec: FilterSpec
    coefficients: tuple[float, ...]
    claimed_psl_db: float | None = None
    corrected_psl_db: float | None = None
    table: str = ""
    line: int = 0

    @property
    def key(self) -> tuple:
        s = self.spec
        return (s.n, s.kind, s.expansion, s.bw, s.m1, s.t, s.binding)


@dataclass(frozen=True)
class TableRowResult:
    """Recomputation of one fixture.

    Every delta is signed ``computed - published``.  ``optimum`` fields stay
    ``None`` unless the row was optimised.
    """

    fixture: PublishedFixture
    recomputed_psl_db: float
    optimum_coefficients: tuple[float, ...] | None = None
    optimum_psl_db: float | None = None

    @property
    def spec(self) -> FilterSpec:
        return self.fixture.spec

    @property
    def recompute_delta(self) -> float | None:
        c = self.fixture.corrected_psl_db
        return None if c is None else self.recomputed_psl_db - c

    @property
    def coefficient_deltas(self) -> tuple[float, ...] | None:
        if self.optimum_coefficients is None:
            return None
        return tuple(a - b for a, b in zip(self.optimum_coefficients, self.fixture.coefficients))

    @property
    def psl_delta(self) -> float | None:
        c = self.fixture.corrected_psl_db
        if self.optimum_psl_db is None or c is None:
            return None
        return self.optimum_psl_db - c

    @property
    def claim_struck(self) -> bool:
        c = self.fixture.claimed_psl_db
        return c is not None and abs(c - self.recomputed_psl_db) > STRIKE_DB

    @property
    def within_tolerance(self) -> bool:
        """Whether the row reproduces inside the acceptance bands.

        Optimised rows are judged on the re-optimised coefficients and PSL;
        the PSL of the rounded published coefficients is informational
        there (see :attr:`recompute_delta`).  Other rows are judged on the
        recomputed PSL of their published coefficients.
        """
        c = self.fixture.corrected_psl_db
        if self.optimum_coefficients is None:
            d = self.recompute_delta
            return d is None or abs(d) <= psl_tolerance(c)
        ok = max(abs(x) for x in self.coefficient_deltas) <= coefficient_tolerance(self.spec)
        pd = self.psl_delta
        if pd is not None:
            ok &= abs(pd) <= psl_tolerance(c)
        return bool(ok)


def default_fixture_path() -> Path:
    return Path(str(resources.files("fsfdesign") / "data" / "fixtures.csv"))


def _manifest_for(path: Path) -> Path:
    return path.with_name(path.stem + "_manifest.json")


def _number(text: str, lineno: int, col: str, optional: bool = True):
    text = text.strip()
    if text == "":
        if optional:
            return None
        raise ParseError(f"line {lineno}, column {col!r}: value required")
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"line {lineno}, column {col!r}: not a number: {text!r}") from None


def _integer(text: str, lineno: int, col: str, default=None) -> int:
    text = text.strip()
    if text == "" and default is not None:
        return default
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"line {lineno}, column {col!r}: not an integer: {text!r}") from None


def _parse_row(row: list[str], lineno: int, table: str) -> PublishedFixture:
    if len(row) != len(COLUMNS):
        raise ParseError(f"line {lineno}: expected {len(COLUMNS)} columns, got {len(row)}")
    f = dict(zip(COLUMNS, row))
    source = f["source"].strip()
    if source not in SOURCES:
        raise ParseError(f"line {lineno}, column 'source': unknown source {source!r}")
    kind = f["kind"].strip()
    try:
        spec = FilterSpec(
            n=_integer(f["n"], lineno, "n"),
            bw=_integer(f["bw"], lineno, "bw"),
            t=_integer(f["t"], lineno, "t"),
            kind=kind,
            expansion=f["expansion"].strip(),
            m1=_integer(f["m1"], lineno, "m1", default=0),
            binding=f["binding"].strip(),
        )
    except FsfError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"line {lineno}: invalid specification: {exc}") from None
    coeffs = tuple(_number(x, lineno, "coeffs", optional=False) for x in f["coeffs"].split())
    if len(coeffs) != spec.num_variables:
        raise ArityMismatch(
            f"line {lineno}, column 'coeffs': {spec.describe()} needs "
            f"{spec.num_variables} value(s), found {len(coeffs)}"
        )
    return PublishedFixture(
        source=source,
        spec=spec,
        coefficients=coeffs,
        claimed_psl_db=_number(f["claimed_psl_db"], lineno, "claimed_psl_db"),
        corrected_psl_db=_number(f["corrected_psl_db"], lineno, "corrected_psl_db"),
        table=table,
        line=lineno,
    )


def parse_fixtures(text: str) -> list[PublishedFixture]:
    """Parse fixture CSV text (see the module docstring for the layout)."""
    out = []
    table = ""
    header_seen = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if body.startswith("table:"):
                table = body.split(":", 1)[1].strip()
            continue
        row = next(csv.reader([line]))
        if not header_seen:
            if tuple(c.strip() for c in row) != COLUMNS:
                raise ParseError(f"line {lineno}: header must be {','.join(COLUMNS)}")
            header_seen = True
            continue
        out.append(_parse_row(row, lineno, table))
    if not header_seen:
        raise ParseError("line 1: missing header row")
    return out


def table_counts(fixtures) -> dict[str, int]:
    counts: dict[str, int] = {}
    for f in fixtures:
        counts[f.table] = counts.get(f.table, 0) + 1
    return counts


def load_fixtures(path=None, check_manifest: bool = True) -> list[PublishedFixture]:
    """Every fixture row in file order.

    When a ``<stem>_manifest.json`` sits next to the file its total and
    per-table counts must match, which catches dropped or duplicated rows.
    """
    path = Path(path) if path is not None else default_fixture_path()
    fixtures = parse_fixtures(path.read_text())
    mpath = _manifest_for(path)
    if check_manifest and mpath.exists():
        manifest = json.loads(mpath.read_text())
        counts = table_counts(fixtures)
        if manifest.get("tables", counts) != counts or manifest.get("total", len(fixtures)) != len(fixtures):
            raise ParseError(
                f"{path.name}: row counts {counts} (total {len(fixtures)}) disagree with "
                f"manifest {manifest.get('tables')} (total {manifest.get('total')})"
            )
    return fixtures


def verify_fixture(f: PublishedFixture, g: float = DEFAULT_G, optimise: bool | None = None,
                   opts: SolveOptions | None = None) -> TableRowResult:
    """Recompute the PSL of a fixture's coefficients.

    Rows from :data:`OPTIMAL` are also re-optimised by default so their
    coefficients can be compared; pass ``optimise`` to override.
    """
    recomputed = psl(f.spec, f.coefficients, g).psl_db
    if optimise is None:
        optimise = f.source == OPTIMAL
    if not optimise:
        return TableRowResult(f, recomputed)
    res = optimize(f.spec, opts or SolveOptions(g=g))
    return TableRowResult(f, recomputed, res.coefficients, res.psl_db)


def _sort_key(r: TableRowResult):
    s = r.spec
    return (s.n, s.bw, s.m1, s.t, s.binding, s.expansion, SOURCES.index(r.fixture.source), r.fixture.line)


def _verify_star(args):
    return verify_fixture(*args)


def run_preset(preset: str, n: int | None = None, g: float = DEFAULT_G, *, bw: int | None = None,
               t: int | None = None, m1: int | None = None, fixtures=None,
               workers: int = 1) -> list[TableRowResult]:
    """Regenerate one embedded table.

    Optimal rows are re-optimised; published rows in the same table are
    only re-measured.  Filters select rows by ``n``, ``bw``, ``t``, ``m1``.
    Results are sorted by (n, bw, m1, t) whatever the worker count.
    """
    if preset not in PRESETS:
        raise UnknownPreset(f"unknown table {preset!r}; choose from {', '.join(PRESETS)}")
    fixtures = load_fixtures() if fixtures is None else fixtures
    rows = [f for f in fixtures if f.table == preset
            and (n is None or f.spec.n == n)
            and (bw is None or f.spec.bw == bw)
            and (t is None or f.spec.t == t)
            and (m1 is None or f.spec.m1 == m1)]
    jobs = [(f, g) for f in rows]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_verify_star, jobs, chunksize=4))
    else:
        results = [verify_fixture(*j) for j in jobs]
    return sorted(results, key=_sort_key)


def _fmt_coeffs(values) -> str:
    return " ".join(f"{v:.8f}" for v in values)


def _fmt_db(x: float | None) -> str:
    return "" if x is None or not math.isfinite(x) else f"{x:.4f}"


def _fmt_claim(x: float | None) -> str:
    return "" if x is None else repr(float(x))


def _groups(results):
    groups: dict[tuple, list[TableRowResult]] = {}
    for r in sorted(results, key=_sort_key):
        groups.setdefault(r.fixture.key, []).append(r)
    return groups


def _markdown(results) -> str:
    out = ["| design | source | coefficients | claimed PSL (dB) | PSL (dB) |",
           "|---|---|---|---|---|"]
    for rows in _groups(results).values():
        label = rows[0].spec.describe()
        for r in rows:
            f = r.fixture
            if f.source == OPTIMAL:
                coeffs = r.optimum_coefficients or f.coefficients
                level = r.optimum_psl_db if r.optimum_psl_db is not None else r.recomputed_psl_db
                out.append(f"| {label} | optimal | {_fmt_coeffs(coeffs)} | | {_fmt_db(level)} |")
                continue
            claim = _fmt_claim(f.claimed_psl_db)
            if claim and r.claim_struck:
                claim = f"~~{claim}~~"
            out.append(f"| {label} | {f.source} | {_fmt_coeffs(f.coefficients)} | {claim} | "
                       f"{_fmt_db(r.recomputed_psl_db)} |")
    return "\n".join(out) + "\n"


def _csv(results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "kind", "expansion", "bw", "m1", "t", "binding", "source",
                "coeffs", "claimed_psl_db", "claim_struck", "recomputed_psl_db",
                "optimum_coeffs", "optimum_psl_db", "coeff_deltas", "psl_delta"])
    for rows in _groups(results).values():
        for r in rows:
            s, f = r.spec, r.fixture
            w.writerow([
                s.n, s.kind, s.expansion, s.bw, s.m1 if s.kind == "bandpass" else "", s.t,
                s.binding, f.source, " ".join(repr(c) for c in f.coefficients),
                "" if f.claimed_psl_db is None else repr(f.claimed_psl_db),
                int(r.claim_struck), repr(r.recomputed_psl_db),
                "" if r.optimum_coefficients is None else " ".join(repr(c) for c in r.optimum_coefficients),
                "" if r.optimum_psl_db is None else repr(r.optimum_psl_db),
                "" if r.coefficient_deltas is None else " ".join(repr(c) for c in r.coefficient_deltas),
                "" if r.psl_delta is None else repr(r.psl_delta),
            ])
    return buf.getvalue()


def comparison_report(results, fmt: str = "md") -> str:
    """Render results grouped by design, optimal row first.

    A claimed PSL that misses the recomputed value by more than
    :data:`STRIKE_DB` is struck through in Markdown and flagged in CSV.
    """
    results = list(results)
    if not results:
        raise ValueError("comparison_report needs at least one result")
    if fmt == "md":
        return _markdown(results)
    if fmt == "csv":
        return _csv(results)
    raise ValueError(f"unknown report format {fmt!r}")
