"""Dataset and report file formats.

Datasets are plain CSV with a fixed header::

    temperature_K,chi_muB_per_FU_Oe[,sigma]

Lines starting with ``#`` are comments; a ``# field_Oe=<value>`` comment
records the applied field (default 100 Oe).  Extra columns after the named
ones are ignored, so analysis reports (which append witness/concurrence/
Bell columns) parse back as datasets.  ``write_dataset`` serializes values
with 17 significant digits, making a write/parse round trip bit-exact.

Reports are the same shape: ``# key=value`` header lines (parameters,
thresholds, provenance) followed by one CSV table, values in scientific
notation with 12 significant digits.  One self-describing artifact per run.
"""

import hashlib
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dimer import ModelParams, ThresholdSet
from .errors import EmptyDatasetError, MalformedRowError, NonPositiveTemperatureError
from .fitting import SusceptibilityDataset

DATASET_COLUMNS = ("temperature_K", "chi_muB_per_FU_Oe")
DEFAULT_FIELD_OE = 100.0

# 12 significant digits for report tables, 17 for datasets (bit-exact round trip).
REPORT_FORMAT = "{:.11e}"
DATASET_FORMAT = "{:.16e}"


def format_value(value) -> str:
    """Render a header value: floats via repr (round-trip), others via str."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_float(text: str, line_number: int, what: str) -> float:
    text = text.strip()
    # float() also accepts underscores, inf and nan; none belong in a data file.
    if not text or "_" in text:
        raise MalformedRowError(line_number, f"bad {what} value {text!r}")
    try:
        value = float(text)
    except ValueError:
        raise MalformedRowError(line_number, f"bad {what} value {text!r}") from None
    if not math.isfinite(value):
        raise MalformedRowError(line_number, f"non-finite {what} value {text!r}")
    return value


def parse_key_values(path) -> dict:
    """All ``# key=value`` comment entries of a file, as strings."""
    entries = {}
    with open(path, "r", encoding="utf-8") as handle:
        for raw in handle:
            line = raw.strip()
            if not line.startswith("#"):
                continue
            body = line[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                entries[key.strip()] = value.strip()
    return entries


def parse_dataset(path) -> SusceptibilityDataset:
    """Read a susceptibility CSV; see the module docstring for the format.

    Raises :class:`MalformedRowError` (with the line number) on rows that
    do not parse, :class:`NonPositiveTemperatureError` on T <= 0, and
    :class:`EmptyDatasetError` when no data rows are present.
    """
    applied_field = DEFAULT_FIELD_OE
    label = ""
    sigma_index = None
    n_columns = None
    temperatures, chis, sigmas = [], [], []
    header_seen = False

    with open(path, "r", encoding="utf-8") as handle:
        for line_number, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    key = key.strip()
                    if key == "field_Oe":
                        applied_field = _parse_float(value, line_number, "field_Oe")
                    elif key == "label":
                        label = value.strip()
                continue
            columns = [c.strip() for c in line.split(",")]
            if not header_seen:
                if tuple(columns[:2]) != DATASET_COLUMNS:
                    raise MalformedRowError(
                        line_number,
                        "header must start with "
                        f"'{DATASET_COLUMNS[0]},{DATASET_COLUMNS[1]}', got {line!r}",
                    )
                if "sigma" in columns[2:]:
                    sigma_index = columns.index("sigma")
                n_columns = len(columns)
                header_seen = True
                continue
            if len(columns) != n_columns:
                raise MalformedRowError(
                    line_number, f"expected {n_columns} fields, got {len(columns)}"
                )
            temperature = _parse_float(columns[0], line_number, "temperature")
            if temperature <= 0.0:
                raise NonPositiveTemperatureError(
                    f"line {line_number}: temperature must be > 0 K, got {temperature}"
                )
            chi = _parse_float(columns[1], line_number, "chi")
            temperatures.append(temperature)
            chis.append(chi)
            if sigma_index is not None:
                sigma = _parse_float(columns[sigma_index], line_number, "sigma")
                if sigma <= 0.0:
                    raise MalformedRowError(line_number, f"sigma must be > 0, got {sigma}")
                sigmas.append(sigma)

    if not temperatures:
        raise EmptyDatasetError(f"{path}: no data rows")
    return SusceptibilityDataset(
        temperatures=np.array(temperatures),
        chi=np.array(chis),
        sigma=np.array(sigmas) if sigma_index is not None else None,
        applied_field=applied_field,
        label=label,
    )


def render_dataset(dataset: SusceptibilityDataset, extra_comments=()) -> str:
    """Dataset CSV text that parses back bit-for-bit.

    ``extra_comments`` are additional ``# key=value`` lines (e.g. a config
    echo); parsers ignore unknown keys.
    """
    lines = [f"# field_Oe={format_value(float(dataset.applied_field))}"]
    if dataset.label:
        lines.append(f"# label={dataset.label}")
    lines.extend(extra_comments)
    header = ",".join(DATASET_COLUMNS)
    if dataset.sigma is not None:
        header += ",sigma"
    lines.append(header)
    for k in range(dataset.n_points):
        row = [DATASET_FORMAT.format(dataset.temperatures[k]),
               DATASET_FORMAT.format(dataset.chi[k])]
        if dataset.sigma is not None:
            row.append(DATASET_FORMAT.format(dataset.sigma[k]))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def write_dataset(dataset: SusceptibilityDataset, path, extra_comments=()) -> None:
    """Write a dataset CSV that parses back bit-for-bit."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(render_dataset(dataset, extra_comments))


def file_sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class EntanglementReport:
    """Per-temperature curves plus thresholds, parameters and provenance.

    rows are (T, chi_model, chi_data or None, witness, concurrence, bell),
    sorted ascending in T.  provenance maps header keys (config echo, input
    file hash) to values; together with the parameters it is sufficient to
    reproduce the run.
    """

    rows: list
    params: ModelParams
    thresholds: Optional[ThresholdSet]
    provenance: dict = field(default_factory=dict)
    suspicious_temperatures: list = field(default_factory=list)

    def __post_init__(self):
        self.rows = sorted(self.rows, key=lambda row: row[0])
        for row in self.rows:
            for value in row:
                if value is not None and not math.isfinite(value):
                    raise ValueError(f"non-finite report value in row {row}")


def params_header_lines(params: ModelParams) -> list:
    return [
        f"# j_over_kb_K={format_value(float(params.j_over_kb))}",
        f"# g={format_value(float(params.g))}",
        f"# curie_c_K_muB_per_FU_Oe={format_value(float(params.curie_c))}",
        f"# n_spins={params.n_spins}",
        f"# spin={format_value(float(params.spin))}",
    ]


def threshold_header_lines(thresholds: Optional[ThresholdSet]) -> list:
    if thresholds is None:
        return ["# thresholds=absent"]
    return [
        f"# T_e_K={format_value(thresholds.t_entanglement)}",
        f"# T_bell_K={format_value(thresholds.t_bell)}",
        f"# T_plateau_K={format_value(thresholds.t_plateau)}",
        f"# plateau_epsilon={format_value(thresholds.plateau_epsilon)}",
    ]


def render_report(report: EntanglementReport) -> str:
    """Render an analysis report to the self-describing text format."""
    lines = ["# spindimer analyze report", "# chi_units=muB_per_FU_Oe"]
    lines += params_header_lines(report.params)
    lines += threshold_header_lines(report.thresholds)
    for key, value in report.provenance.items():
        lines.append(f"# {key}={format_value(value)}")
    if report.suspicious_temperatures:
        temps = ",".join(REPORT_FORMAT.format(t) for t in report.suspicious_temperatures)
        lines.append(f"# suspicious_rows={len(report.suspicious_temperatures)}")
        lines.append(f"# suspicious_temperatures_K={temps}")
    with_data = any(row[2] is not None for row in report.rows)
    header = ["temperature_K", "chi_muB_per_FU_Oe"]
    if with_data:
        header.append("chi_data_muB_per_FU_Oe")
    header += ["entanglement_witness", "concurrence", "bell_mean_abs"]
    lines.append(",".join(header))
    for temperature, chi_model, chi_data, witness, conc, bell in report.rows:
        cells = [REPORT_FORMAT.format(temperature), REPORT_FORMAT.format(chi_model)]
        if with_data:
            cells.append(REPORT_FORMAT.format(chi_data))
        cells += [REPORT_FORMAT.format(witness), REPORT_FORMAT.format(conc),
                  REPORT_FORMAT.format(bell)]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
