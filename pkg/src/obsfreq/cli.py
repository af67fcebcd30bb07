"""``obsfreq`` command line: JSON-configured experiment runs and table export.

    obsfreq run --config <path> [--output <path>] [--seed <int>] [--format csv|json]
    obsfreq tables --output-dir <path>

Exit codes: 0 success, 2 schema violation, 3 experiment error, 4 I/O error.
Failures print one JSON error object on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from . import boxsim
from .classical import JointDistribution, make_distribution, wd_classical
from .errors import ExperimentError, NeverObservable, ObsFreqError, SchemaViolation, ZeroContext
from .inequalities import ChshScenario, certify, chsh_star
from .operators import (
    binary_projector,
    born,
    observability_operators,
    ratio_frequency,
    ternary_embed,
    tomographic_embed,
)
from .qubit import P_QUBIT, SphereDirection, bloch_project, restored_born
from .search import violation_search
from .ternary import TernaryDistribution, from_atoms, lift_classical, make_ternary, wd_star

DEFAULT_SEED = 20240229
SCHEMA_VERSION = 1

EXIT_OK, EXIT_SCHEMA, EXIT_EXPERIMENT, EXIT_IO = 0, 2, 3, 4


class CliIoError(ObsFreqError, OSError):
    module = "cli"


@lru_cache(maxsize=None)
def config_schema() -> dict:
    return json.loads(resources.files("obsfreq.data").joinpath("config_schema.json").read_text())


@lru_cache(maxsize=None)
def _fixture_file() -> dict:
    data = json.loads(resources.files("obsfreq.data").joinpath("fixtures.json").read_text())
    validate_fixtures(data)
    return data


def validate_fixtures(data: dict) -> None:
    schema = config_schema()
    sub = {"$ref": "#/$defs/fixture_file", "$defs": schema["$defs"]}
    try:
        jsonschema.validate(data, sub)
    except jsonschema.ValidationError as exc:
        raise SchemaViolation(f"fixture file: {exc.message}") from None


def fixture_names() -> list[str]:
    return sorted(_fixture_file()["distributions"])


def build_distribution(data: dict) -> JointDistribution | TernaryDistribution:
    if "fixture" in data:
        fixtures = _fixture_file()["distributions"]
        if data["fixture"] not in fixtures:
            raise SchemaViolation(f"unknown fixture {data['fixture']!r}; known: {fixture_names()}")
        data = fixtures[data["fixture"]]
    if data["kind"] == "classical":
        return make_distribution(data["n"], data["weights"])
    if "atoms" in data:
        return from_atoms(data["atoms"])
    return make_ternary(data["n"], data["weights"])


def load_fixture(name: str) -> JointDistribution | TernaryDistribution:
    return build_distribution({"fixture": name})


@dataclass
class ExperimentSpec:
    command: str
    parameters: dict
    output_path: str | None = None
    seed: int = DEFAULT_SEED
    format: str | None = None
    raw: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_dict(cls, data: Any) -> "ExperimentSpec":
        try:
            jsonschema.validate(data, config_schema())
        except jsonschema.ValidationError as exc:
            path = "/".join(str(p) for p in exc.absolute_path)
            raise SchemaViolation(f"{path or '<root>'}: {exc.message}") from None
        return cls(
            command=data["command"],
            parameters=data["parameters"],
            output_path=data.get("output_path"),
            seed=data.get("seed", DEFAULT_SEED),
            format=data.get("format"),
            raw=data,
        )


@dataclass
class Result:
    payload: dict
    columns: tuple[str, ...]
    rows: list[dict]


# -- command handlers ---------------------------------------------------------


def _inequality(spec: ExperimentSpec) -> Result:
    p = spec.parameters
    d = build_distribution(p["distribution"])
    name = p["inequality"]
    props = p.get("propositions")
    if name == "wd_classical":
        if not isinstance(d, JointDistribution):
            raise SchemaViolation("wd_classical needs a classical distribution")
        report = wd_classical(d, *(props or (0, 1, 2)))
    else:
        if isinstance(d, JointDistribution):
            d = lift_classical(d)
        if name == "wd_star":
            report = wd_star(d, *(props or (0, 1, 2)))
        else:
            report = chsh_star(ChshScenario(d, tuple(props or (0, 1, 2, 3))))
    row = report.to_dict()
    row["propositions"] = " ".join(map(str, report.propositions))
    return Result(
        {"command": "inequality", "report": report.to_dict()},
        ("name", "lhs", "bound", "margin", "violated", "propositions"),
        [row],
    )


def _search(spec: ExperimentSpec) -> Result:
    p = spec.parameters
    dist, score = violation_search(p["objective"], p["n"], p["budget"], spec.seed)
    support = dist.support()
    payload = {
        "command": "search",
        "objective": p["objective"],
        "n": p["n"],
        "budget": p["budget"],
        "seed": spec.seed,
        "score": score,
        "support": support,
    }
    base = {"objective": p["objective"], "n": p["n"], "budget": p["budget"], "seed": spec.seed, "score": score}
    rows = [dict(base, atom=label, weight=w) for label, w in support.items()]
    return Result(payload, ("objective", "n", "budget", "seed", "score", "atom", "weight"), rows)


def _embed(spec: ExperimentSpec) -> Result:
    p = spec.parameters
    rows: list[dict] = []
    payload: dict = {"command": "embed"}
    if "direction" in p:
        direction = SphereDirection.from_weights(p["direction"])
        q = bloch_project(direction)
        payload["qubit"] = {"a0": q.a0, "a1": q.a1, "phi": q.phi, "theta": q.theta}
        payload["restored_born"] = restored_born(q)
        rows += [
            {"quantity": "phi", "index": 0, "label": "", "value": q.phi},
            {"quantity": "theta", "index": 0, "label": "", "value": q.theta},
            {"quantity": "restored_born", "index": 0, "label": "", "value": restored_born(q)},
        ]
        return Result(payload, ("quantity", "index", "label", "value"), rows)

    d = build_distribution(p["distribution"])
    labels = d.labels()
    if isinstance(d, JointDistribution):
        s = tomographic_embed(d)
        freqs = [born(s, binary_projector(d.n, i)) for i in range(d.n)]
        kind, freq_name = "classical", "born"
    else:
        s = ternary_embed(d)
        freqs = []
        for i in range(d.n):
            try:
                freqs.append(ratio_frequency(s, *observability_operators(d.n, i)))
            except ZeroContext:
                freqs.append(math.nan)
        kind, freq_name = "ternary", "ratio_frequency"
    payload.update(kind=kind, n=d.n, basis=labels, state=s.coords.tolist(), frequencies=freqs)
    rows += [{"quantity": "state", "index": k, "label": lab, "value": v} for k, (lab, v) in enumerate(zip(labels, s.coords))]
    rows += [{"quantity": freq_name, "index": i, "label": "", "value": f} for i, f in enumerate(freqs)]
    if kind == "ternary" and d.n == 1:
        try:
            q = bloch_project(SphereDirection.from_weights(d.weights))
            payload["qubit"] = {"a0": q.a0, "a1": q.a1, "phi": q.phi, "theta": q.theta}
            payload["restored_born"] = restored_born(q)
            rows.append({"quantity": "restored_born", "index": 0, "label": "", "value": restored_born(q)})
        except NeverObservable:
            pass
    return Result(payload, ("quantity", "index", "label", "value"), rows)


def _open_model(data: dict) -> boxsim.OpenModel:
    kind = data["kind"]
    if kind == "always":
        return boxsim.Always()
    if kind == "independent":
        return boxsim.Independent(data["prob"])
    if kind == "granular":
        return boxsim.Granular(data["flash_rate"])
    return boxsim.Coupled(data["open_if_alive"], data["open_if_dead"])


def _simulate(spec: ExperimentSpec) -> Result:
    p = spec.parameters
    models = p["open_models"] if "open_models" in p else [p["open_model"]]
    bias = p.get("right_bias", 0.5)
    base = boxsim.BoxExperimentConfig(
        peg_depth=p.get("peg_depth", 1),
        right_bias=tuple(bias) if isinstance(bias, list) else bias,
        trials=p["trials"],
        seed=spec.seed,
    )
    rows = boxsim.deviation_scan(boxsim.sweep(base, [_open_model(m) for m in models]))
    dict_rows = [{c: getattr(r, c) for c in boxsim.CSV_COLUMNS} for r in rows]
    payload = {"command": "simulate", "seed": spec.seed, "open_models": models, "rows": dict_rows}
    return Result(payload, boxsim.CSV_COLUMNS, dict_rows)


def _certify(spec: ExperimentSpec) -> Result:
    p = spec.parameters
    d = build_distribution(p["distribution"])
    if isinstance(d, JointDistribution):
        d = lift_classical(d)
    cert = certify(d, p.get("inequalities"))
    row = {"verdict": cert.verdict.value, "checked": cert.checked, "undefined": cert.undefined}
    if cert.report is not None:
        row.update(cert.report.to_dict())
        row["propositions"] = " ".join(map(str, cert.report.propositions))
    payload = dict(command="certify", **cert.to_dict())
    cols = ("verdict", "checked", "undefined", "name", "lhs", "bound", "margin", "propositions")
    return Result(payload, cols, [row])


HANDLERS = {
    "inequality": _inequality,
    "search": _search,
    "embed": _embed,
    "simulate": _simulate,
    "certify": _certify,
}


# -- serialization --------------------------------------------------------------


def _fmt(v: Any) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, complex):
        return f"{format(v.real, '.17g')}{format(v.imag, '+.17g')}j"
    return "" if v is None else str(v)


def to_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def _jsonable(v: Any) -> Any:
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, complex):
        return [_jsonable(v.real), _jsonable(v.imag)]
    return v


def to_json(payload: dict) -> str:
    return json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"


def render(result: Result, fmt: str) -> str:
    return to_csv(result.columns, result.rows) if fmt == "csv" else to_json(result.payload)


def execute(spec: ExperimentSpec) -> Result:
    try:
        return HANDLERS[spec.command](spec)
    except SchemaViolation:
        raise
    except ObsFreqError as exc:
        raise ExperimentError(exc) from exc


def run(spec: ExperimentSpec, fmt: str | None = None) -> int:
    """Execute ``spec`` and write its output; returns the exit status."""
    try:
        result = execute(spec)
    except SchemaViolation as exc:
        return _fail(EXIT_SCHEMA, exc)
    except ExperimentError as exc:
        return _fail(EXIT_EXPERIMENT, exc)
    fmt = fmt or spec.format or ("csv" if (spec.output_path or "").endswith(".csv") else "json")
    text = render(result, fmt)
    if spec.output_path is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        path = Path(spec.output_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        return _fail(EXIT_IO, CliIoError(str(exc)))
    return EXIT_OK


def _fail(code: int, exc: ObsFreqError) -> int:
    sys.stderr.write(json.dumps({"error": exc.to_dict(), "exit_code": code}, sort_keys=True) + "\n")
    return code


def _matrix_csv(m: np.ndarray) -> str:
    return "".join(",".join(_fmt(int(x) if float(x).is_integer() else float(x)) for x in row) + "\n" for row in np.real(m))


def dialogue_tables() -> dict[str, str]:
    """File name -> exact content for each object displayed in the dialogue."""
    from .classical import atom_label as bin_label
    from .ternary import atom_label as ter_label

    files = {
        "truth_table.csv": ",q,~q\np,p&q,p&~q\n~p,~p&q,~p&~q\n",
        "basis_binary_2.txt": " ".join(bin_label(2, k) for k in range(4)) + "\n",
        "basis_ternary_2.txt": " ".join(ter_label(2, k) for k in range(9)) + "\n",
        "P_binary_2.csv": _matrix_csv(binary_projector(2, 0).matrix),
        "Q_binary_2.csv": _matrix_csv(binary_projector(2, 1).matrix),
    }
    p, pstar = observability_operators(2, 0)
    files["P_ternary_2.csv"] = _matrix_csv(p.matrix)
    files["Pstar_ternary_2.csv"] = _matrix_csv(pstar.matrix)
    files["P_qubit.csv"] = _matrix_csv(P_QUBIT)
    fixtures = _fixture_file()["distributions"]
    for name in ("wd_star_witness", "chsh_star_witness"):
        files[f"{name}.json"] = to_json(fixtures[name])
    return files


def emit_dialogue_tables(output_dir: str | Path) -> int:
    try:
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in dialogue_tables().items():
            with open(out / name, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    except OSError as exc:
        return _fail(EXIT_IO, CliIoError(str(exc)))
    return EXIT_OK


def load_spec(path: str | Path) -> ExperimentSpec:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"config is not valid JSON: {exc}") from None
    return ExperimentSpec.from_dict(data)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="obsfreq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True)
    p_run = sub.add_parser("run", help="run one experiment from a JSON config")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--output")
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--format", choices=("csv", "json"))
    p_tab = sub.add_parser("tables", help="write the dialogue's displayed objects")
    p_tab.add_argument("--output-dir", required=True)
    args = parser.parse_args(argv)

    if args.cmd == "tables":
        return emit_dialogue_tables(args.output_dir)

    try:
        spec = load_spec(args.config)
    except OSError as exc:
        return _fail(EXIT_IO, CliIoError(str(exc)))
    except SchemaViolation as exc:
        return _fail(EXIT_SCHEMA, exc)
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            return _fail(EXIT_SCHEMA, SchemaViolation("--seed must be a 64-bit unsigned integer"))
        spec.seed = args.seed
    if args.output:
        spec.output_path = args.output
    return run(spec, args.format)


if __name__ == "__main__":
    sys.exit(main())
