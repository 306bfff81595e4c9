"""Detection scoring: rectangle matching, recall/precision/f, block rates.

The match between two rectangles is the area of their intersection over
the area of the smallest axis-aligned box containing both: 1 for
identical rectangles, 0 for disjoint ones.  Recall averages each target's
best match against the estimates, precision each estimate's best match
against the targets, and the f-measure blends the two through the weight
alpha (0.5 = harmonic mean).

Block-level rates follow the detected/false/missing-data block counts:
an estimate overlapping any target (best match above ``tau_detect``)
counts as a true detected block, otherwise as a false one; a true block
covering less than ``tau_full`` of its target's area is additionally a
missing-data block.  Character-level truth is unavailable, so target-area
coverage is a proxy for missing characters and is flagged as such in
reports.
"""

import csv
import json
from dataclasses import dataclass, field

DEFAULT_ALPHA = 0.5
DEFAULT_TAU_DETECT = 0.0
DEFAULT_TAU_FULL = 0.9


def intersection_area(r1, r2):
    iw = min(r1.x2, r2.x2) - max(r1.x, r2.x)
    ih = min(r1.y2, r2.y2) - max(r1.y, r2.y)
    if iw <= 0 or ih <= 0:
        return 0
    return iw * ih


def enclosing_area(r1, r2):
    return (max(r1.x2, r2.x2) - min(r1.x, r2.x)) * (max(r1.y2, r2.y2) - min(r1.y, r2.y))


def match_score(r1, r2):
    """Intersection area over the area of the minimal box enclosing both."""
    return intersection_area(r1, r2) / enclosing_area(r1, r2)


def best_match(rect, rects):
    """Best match of one rectangle against a set; 0 for an empty set."""
    return max((match_score(rect, other) for other in rects), default=0.0)


def recall(targets, estimates):
    """Mean best match of each ground-truth rectangle against the estimates."""
    if not targets:
        raise ValueError("recall is undefined for empty ground truth")
    return sum(best_match(t, estimates) for t in targets) / len(targets)


def precision(targets, estimates):
    """Mean best match of each estimate against the ground truth.

    An empty estimate set scores 0 so aggregate tables stay gap-free.
    """
    if not estimates:
        return 0.0
    return sum(best_match(e, targets) for e in estimates) / len(estimates)


def fmeasure(p, r, alpha=DEFAULT_ALPHA):
    """1 / (alpha/p + (1-alpha)/r); zero precision or recall gives 0."""
    if p == 0.0 or r == 0.0:
        return 0.0
    return 1.0 / (alpha / p + (1.0 - alpha) / r)


@dataclass
class BlockStats:
    atb: int
    tdb: int
    fdb: int
    mdb: int
    dr: float
    fpr: float
    mdr: float
    flags: list = field(default_factory=list)


def _rates_from_counts(atb, tdb, fdb, mdb):
    flags = []
    if atb > 0:
        dr = tdb / atb
        if dr > 1.0:
            dr = 1.0
            flags.append("DR clamped to 1 (more matching estimates than targets)")
    else:
        dr = 0.0
        flags.append("no targets: DR set to 0")
    if tdb + fdb > 0:
        fpr = fdb / (tdb + fdb)
    else:
        fpr = 0.0
        flags.append("no estimates: FPR set to 0")
    if tdb > 0:
        mdr = mdb / tdb
    else:
        mdr = 0.0
        flags.append("no detected blocks: MDR set to 0")
    return dr, fpr, mdr, flags


def block_rates(targets, estimates, tau_detect=DEFAULT_TAU_DETECT, tau_full=DEFAULT_TAU_FULL):
    """Block counts and DR/FPR/MDR for one frame."""
    if not 0.0 <= tau_detect <= tau_full <= 1.0:
        raise ValueError(f"need 0 <= tau_detect <= tau_full <= 1, got {tau_detect}, {tau_full}")
    atb = len(targets)
    tdb = fdb = mdb = 0
    for est in estimates:
        scores = [match_score(est, t) for t in targets]
        best = max(scores, default=0.0)
        if best > tau_detect:
            tdb += 1
            matched = targets[scores.index(best)]
            coverage = intersection_area(est, matched) / matched.area
            if coverage < tau_full:
                mdb += 1
        else:
            fdb += 1
    dr, fpr, mdr, flags = _rates_from_counts(atb, tdb, fdb, mdb)
    return BlockStats(atb=atb, tdb=tdb, fdb=fdb, mdb=mdb, dr=dr, fpr=fpr, mdr=mdr, flags=flags)


@dataclass
class EvalPair:
    """Ground truth and detections for one frame, original coordinates."""

    frame: str
    targets: list
    estimates: list


@dataclass
class FrameScore:
    frame: str
    recall: float
    precision: float
    fmeasure: float
    blocks: BlockStats


@dataclass
class EvalReport:
    frames: list
    skipped: list
    recall: float
    precision: float
    fmeasure: float
    blocks: BlockStats
    alpha: float
    tau_detect: float
    tau_full: float


def evaluate_pairs(
    pairs,
    alpha=DEFAULT_ALPHA,
    tau_detect=DEFAULT_TAU_DETECT,
    tau_full=DEFAULT_TAU_FULL,
):
    """Score every frame and micro-average across the corpus.

    Frames with empty ground truth are excluded from the aggregate and
    listed in ``skipped``.  Micro-averaging pools the per-rectangle best
    matches over all frames (matching never crosses frames).
    """
    frames = []
    skipped = []
    recall_num = 0.0
    recall_den = 0
    precision_num = 0.0
    precision_den = 0
    atb = tdb = fdb = mdb = 0

    for pair in pairs:
        if not pair.targets:
            skipped.append(pair.frame)
            continue
        r = recall(pair.targets, pair.estimates)
        p = precision(pair.targets, pair.estimates)
        blocks = block_rates(pair.targets, pair.estimates, tau_detect, tau_full)
        frames.append(
            FrameScore(
                frame=pair.frame,
                recall=r,
                precision=p,
                fmeasure=fmeasure(p, r, alpha),
                blocks=blocks,
            )
        )
        recall_num += r * len(pair.targets)
        recall_den += len(pair.targets)
        precision_num += p * len(pair.estimates)
        precision_den += len(pair.estimates)
        atb += blocks.atb
        tdb += blocks.tdb
        fdb += blocks.fdb
        mdb += blocks.mdb

    micro_r = recall_num / recall_den if recall_den else 0.0
    micro_p = precision_num / precision_den if precision_den else 0.0
    dr, fpr, mdr, flags = _rates_from_counts(atb, tdb, fdb, mdb)
    return EvalReport(
        frames=frames,
        skipped=skipped,
        recall=micro_r,
        precision=micro_p,
        fmeasure=fmeasure(micro_p, micro_r, alpha),
        blocks=BlockStats(atb=atb, tdb=tdb, fdb=fdb, mdb=mdb, dr=dr, fpr=fpr, mdr=mdr, flags=flags),
        alpha=alpha,
        tau_detect=tau_detect,
        tau_full=tau_full,
    )


def write_report_csv(report, path):
    """Per-frame scores as `frame,recall,precision,fmeasure,ATB,TDB,FDB,MDB`."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["frame", "recall", "precision", "fmeasure", "ATB", "TDB", "FDB", "MDB"])
        for fs in report.frames:
            writer.writerow(
                [
                    fs.frame,
                    f"{fs.recall:.6f}",
                    f"{fs.precision:.6f}",
                    f"{fs.fmeasure:.6f}",
                    fs.blocks.atb,
                    fs.blocks.tdb,
                    fs.blocks.fdb,
                    fs.blocks.mdb,
                ]
            )


def report_summary(report):
    return {
        "frames": len(report.frames),
        "skipped_empty_truth": report.skipped,
        "recall": report.recall,
        "precision": report.precision,
        "fmeasure": report.fmeasure,
        "DR": report.blocks.dr,
        "FPR": report.blocks.fpr,
        "MDR": report.blocks.mdr,
        "ATB": report.blocks.atb,
        "TDB": report.blocks.tdb,
        "FDB": report.blocks.fdb,
        "MDB": report.blocks.mdb,
        "flags": report.blocks.flags,
        "notes": ["MDB uses target-area coverage as a proxy for missing characters"],
        "config": {
            "alpha": report.alpha,
            "tau_detect": report.tau_detect,
            "tau_full": report.tau_full,
        },
    }


def write_report_json(report, path, extra=None):
    summary = report_summary(report)
    if extra:
        summary["config"].update(extra)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
