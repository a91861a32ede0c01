#############################################################################
# sweep.py
#
# SNR sweep: guard length, Upsilon and the capacity lower bound per grid
# point, optionally the MI oracle; CSV and JSON report writers
#
# Sat Oct 17 2026
#############################################################################

import csv
import io
import json
import logging
import math
import warnings
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from asdrp.capacity.base import finite_or_none, to_jsonable
from asdrp.capacity.bounds import (capacity_lower_bound, e_log_h_sq_gaussian,
                                   pre_loglog, upsilon, w_power_bound)
from asdrp.capacity.mi_oracle import LogUniformLaw, estimate_mi
from asdrp.capacity.signaling import (guard_length_closed_form,
                                      select_guard_length)
from asdrp.channel.profiles import majorant_onset
from asdrp.errors import CapacityError
from asdrp.harness.config import SweepConfig

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "snr", "p", "sigma_sq", "guard_len", "tau", "upsilon_nats",
    "c_lb_raw_nats", "c_lb_nats", "mi_oracle_nats", "mi_stderr", "error",
)
NATS_COLUMNS = ("upsilon_nats", "c_lb_raw_nats", "c_lb_nats", "mi_oracle_nats", "mi_stderr")


@dataclass
class SweepRow:
    snr: float
    p: float
    sigma_sq: float
    guard_len: Optional[int] = None
    tau: Optional[int] = None
    upsilon_nats: Optional[float] = None
    c_lb_raw_nats: Optional[float] = None
    c_lb_nats: Optional[float] = None
    mi_oracle_nats: Optional[float] = None
    mi_stderr: Optional[float] = None
    error: str = ""
    # report-only diagnostics, not part of the CSV
    diagnostics: Dict[str, Any] = field(default_factory=dict)


@dataclass
class SweepResult:
    config: SweepConfig
    rows: List[SweepRow]

    def column(self, name: str) -> List[Any]:
        return [getattr(row, name) for row in self.rows]


def point_seed(seed: int, index: int) -> int:
    return seed ^ index


def _evaluate_point(config: SweepConfig, index: int, snr: float) -> SweepRow:
    profile = config.profile
    sigma_sq = config.sigma_sq
    power = snr * sigma_sq
    row = SweepRow(snr=snr, p=power, sigma_sq=sigma_sq)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            L = select_guard_length(profile, power, sigma_sq)
            row.guard_len = L
            row.tau = config.tau_for(L)
            alpha_0, alpha = profile.alpha_0, profile.total_alpha
            row.upsilon_nats = upsilon(e_log_h_sq_gaussian(alpha_0), alpha_0, alpha, sigma_sq)
            report = capacity_lower_bound(
                L, row.tau, power, row.upsilon_nats, snr=snr, rho=config.rho_majorant
            )
            row.c_lb_raw_nats = report.lower_bound_raw
            row.c_lb_nats = report.lower_bound
            row.diagnostics["bound"] = to_jsonable(report)
            row.diagnostics["w_power"] = to_jsonable(w_power_bound(profile, L, power, sigma_sq))
            if snr > math.e:
                row.diagnostics["pre_loglog"] = pre_loglog(report)
            if config.rho_majorant is not None:
                row.diagnostics["closed_form_guard_len"] = guard_length_closed_form(config.rho_majorant, snr)
                # the closed-form guard length is valid for the profile once it reaches the onset
                row.diagnostics["majorant_onset"] = majorant_onset(profile, config.rho_majorant)

            if config.oracle:
                # slot 1 carries the least input power; W variance is bounded by alpha + 2 sigma^2
                law = LogUniformLaw(power=power, tau=row.tau, nu=1)
                mi = estimate_mi(
                    law, alpha_0, alpha + 2.0 * sigma_sq,
                    n_samples=config.n_samples,
                    rng=np.random.default_rng(point_seed(config.seed, index)),
                )
                share = row.tau / (L + row.tau)
                row.mi_oracle_nats = share * mi.value
                row.mi_stderr = share * mi.std_err
                row.diagnostics["mi"] = to_jsonable(mi)
        if caught:
            row.diagnostics["warnings"] = [f"{w.category.__name__}: {w.message}" for w in caught]
        logger.info("snr=%g L=%s tau=%s c_lb=%s", snr, row.guard_len, row.tau, row.c_lb_nats)
    except CapacityError as e:
        row.error = f"{type(e).__name__}: {e}"
        logger.warning("snr=%g failed: %s", snr, row.error)
    return row


def run_sweep(config: SweepConfig, progress: bool = False) -> SweepResult:
    """
    Evaluate every SNR of the grid; rows come back in grid order whatever
    the completion order. Numeric failures land in the `error` column.
    """
    logger.info("sweep over %d SNR points (n_jobs=%d)", len(config.snr_grid), config.n_jobs)
    points = tqdm(
        list(enumerate(config.snr_grid)), desc="SNR points", disable=not progress
    )
    rows = Parallel(n_jobs=config.n_jobs)(
        delayed(_evaluate_point)(config, index, snr) for index, snr in points
    )
    logger.info("sweep done: %d rows, %d errors", len(rows), sum(1 for r in rows if r.error))
    return SweepResult(config=config, rows=list(rows))


#-------------------------------------
# writers
#-------------------------------------

def format_real(value: Optional[float]) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(value)
    return format(float(value), ".17g")


def csv_text(result: SweepResult, bits: bool = False) -> str:
    """CSV with a header row and LF line endings; `bits` rescales the nats columns."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in result.rows:
        cells = []
        for name in CSV_COLUMNS:
            value = getattr(row, name)
            if bits and name in NATS_COLUMNS and value is not None:
                value = value / math.log(2.0)
            cells.append(value if name == "error" else format_real(value))
        writer.writerow(cells)
    return buf.getvalue()


def write_csv(result: SweepResult, path: Path) -> None:
    Path(path).write_bytes(csv_text(result).encode("utf-8"))


def report_dict(result: SweepResult) -> dict:
    points = []
    for row in result.rows:
        point = {f.name: getattr(row, f.name) for f in fields(row) if f.name != "diagnostics"}
        point.update(row.diagnostics)
        points.append(point)
    return {
        "config": result.config.model_dump(mode="json"),
        "points": points,
    }


def write_report(result: SweepResult, path: Path) -> None:
    text = json.dumps(finite_or_none(report_dict(result)), indent=2, allow_nan=False, default=str)
    Path(path).write_text(text + "\n", encoding="utf-8")
