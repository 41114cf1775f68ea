"""Outlet-level aggregation of a partisan media survey.

Input is a respondent-level CSV with columns
``respondent_id,party,outlet,recognized,trust,share,affect`` where party is
Dem/Rep/Ind, recognized is true/false, trust and share are 1..5 Likert values
or the literal ``DK``, and affect is an integer feeling-thermometer score in
[0, 100]. Aggregates are computed over respondents who recognized the
outlet; DK answers are dropped per question (numerator and denominator);
Independents are excluded from the partisan means.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

UNDEFINED = "UNDEFINED"
NO_DATA = "NO_DATA"

INPUT_COLUMNS = ["respondent_id", "party", "outlet", "recognized", "trust", "share", "affect"]
OUTPUT_COLUMNS = ["outlet", "n_dem", "n_rep", "trust_dem", "trust_rep",
                  "share_dem", "share_rep", "affect_dem", "affect_rep", "rep_dem_ratio"]

# A respondent counts as trusting an outlet at 4 or 5 on the 5-point scale
# (top-two-box); this feeds the Rep:Dem ratio.
TRUST_THRESHOLD = 4


@dataclass(frozen=True)
class SurveyResponse:
    respondent_id: str
    party: str  # Dem | Rep | Ind
    outlet: str
    recognized: bool
    trust: int | None  # None encodes DK
    share: int | None
    affect: int


@dataclass
class OutletAggregate:
    outlet: str
    n_dem: int
    n_rep: int
    trust_dem: float | None
    trust_rep: float | None
    share_dem: float | None
    share_rep: float | None
    affect_dem: float | None
    affect_rep: float | None
    rep_dem_ratio: float | None  # None encodes UNDEFINED


def rep_dem_ratio(pct_rep_trust, pct_dem_trust):
    """Republican-to-Democrat trusting-share ratio; None when undefined."""
    for name, v in (("pct_rep_trust", pct_rep_trust), ("pct_dem_trust", pct_dem_trust)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {v}")
    if pct_dem_trust == 0:
        return None
    return pct_rep_trust / pct_dem_trust


def _parse_likert(text, column, row_no):
    if text == "DK":
        return None
    try:
        v = int(text)
    except ValueError:
        raise ValueError(f"row {row_no}: {column} must be 1..5 or DK, got {text!r}") from None
    if not 1 <= v <= 5:
        raise ValueError(f"row {row_no}: {column} must be 1..5 or DK, got {text!r}")
    return v


def _parse_row(rec, row_no):
    party = rec["party"]
    if party not in ("Dem", "Rep", "Ind"):
        raise ValueError(f"row {row_no}: party must be Dem, Rep, or Ind, got {party!r}")
    recognized = rec["recognized"]
    if recognized not in ("true", "false"):
        raise ValueError(f"row {row_no}: recognized must be true or false, got {recognized!r}")
    try:
        affect = int(rec["affect"])
    except ValueError:
        raise ValueError(f"row {row_no}: affect must be an integer, got {rec['affect']!r}") from None
    if not 0 <= affect <= 100:
        raise ValueError(f"row {row_no}: affect must be in [0, 100], got {affect}")
    if not rec["outlet"]:
        raise ValueError(f"row {row_no}: empty outlet name")
    return SurveyResponse(
        respondent_id=rec["respondent_id"],
        party=party,
        outlet=rec["outlet"],
        recognized=recognized == "true",
        trust=_parse_likert(rec["trust"], "trust", row_no),
        share=_parse_likert(rec["share"], "share", row_no),
        affect=affect,
    )


def read_survey_csv(path):
    """Parse and validate the respondent CSV; bad rows name their line number."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: empty file, expected a header row")
        missing = set(INPUT_COLUMNS) - set(reader.fieldnames)
        if missing:
            raise ValueError(f"{path}: missing column(s) {sorted(missing)}")
        extra = set(reader.fieldnames) - set(INPUT_COLUMNS)
        if extra:
            raise ValueError(f"{path}: unexpected column(s) {sorted(extra)}")
        for row_no, rec in enumerate(reader, start=2):
            if None in rec.values() or None in rec:
                raise ValueError(f"row {row_no}: wrong number of fields")
            rows.append(_parse_row(rec, row_no))
    return rows


def _mean(values):
    vals = [v for v in values if v is not None]
    if not vals:
        return None
    return sum(vals) / len(vals)


def outlet_means(responses, outlet, party):
    """(trust_mean, share_mean, affect_mean, n) over recognizing respondents.

    DK answers are excluded from the trust/share numerator and denominator;
    n is the affect denominator (all recognizing respondents of the party).
    """
    if party not in ("Dem", "Rep"):
        raise ValueError(f"party must be Dem or Rep, got {party!r}")
    sel = [r for r in responses if r.outlet == outlet and r.party == party and r.recognized]
    if not sel:
        return None, None, None, 0
    return (
        _mean([r.trust for r in sel]),
        _mean([r.share for r in sel]),
        _mean([r.affect for r in sel]),
        len(sel),
    )


def _trusting_share(responses, outlet, party):
    answered = [
        r.trust for r in responses
        if r.outlet == outlet and r.party == party and r.recognized and r.trust is not None
    ]
    if not answered:
        return None
    return sum(1 for t in answered if t >= TRUST_THRESHOLD) / len(answered)


def aggregate_survey(responses):
    """One OutletAggregate per outlet, sorted ascending by Rep:Dem ratio.

    Undefined ratios sort last; ties break on the outlet name.
    """
    outlets = sorted({r.outlet for r in responses})
    out = []
    for outlet in outlets:
        trust_d, share_d, affect_d, n_d = outlet_means(responses, outlet, "Dem")
        trust_r, share_r, affect_r, n_r = outlet_means(responses, outlet, "Rep")
        pct_d = _trusting_share(responses, outlet, "Dem")
        pct_r = _trusting_share(responses, outlet, "Rep")
        if pct_d is None or pct_r is None:
            ratio = None
        else:
            ratio = rep_dem_ratio(pct_r, pct_d)
        out.append(OutletAggregate(
            outlet=outlet, n_dem=n_d, n_rep=n_r,
            trust_dem=trust_d, trust_rep=trust_r,
            share_dem=share_d, share_rep=share_r,
            affect_dem=affect_d, affect_rep=affect_r,
            rep_dem_ratio=ratio,
        ))
    out.sort(key=lambda a: (a.rep_dem_ratio is None,
                            a.rep_dem_ratio if a.rep_dem_ratio is not None else 0.0,
                            a.outlet))
    return out


def _cell(value, marker=NO_DATA):
    if value is None:
        return marker
    if isinstance(value, float):
        return repr(value)
    return value


def write_aggregates_csv(aggregates, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(OUTPUT_COLUMNS)
        for a in aggregates:
            writer.writerow([
                a.outlet, a.n_dem, a.n_rep,
                _cell(a.trust_dem), _cell(a.trust_rep),
                _cell(a.share_dem), _cell(a.share_rep),
                _cell(a.affect_dem), _cell(a.affect_rep),
                _cell(a.rep_dem_ratio, UNDEFINED),
            ])


def aggregate_survey_file(in_path, out_path):
    write_aggregates_csv(aggregate_survey(read_survey_csv(in_path)), out_path)
