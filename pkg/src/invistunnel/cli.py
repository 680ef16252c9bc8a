"""Command-line client for the scattering service.

Every subcommand assembles a JSON request, posts it to the service (an
in-process instance by default, or a remote one via --server), and
renders the response as CSV or JSON.  Output is deterministic: fixed
column order, fixed float formatting, schema version in a header line.
"""

from __future__ import annotations

import json
import sys

import click
import httpx

SCHEMA_HEADER = "# invistunnel-schema 1"
FMT = "{:.12g}"

EXIT_CONFIG = 2
EXIT_NUMERICS = 3


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from .service import app
    return TestClient(app, base_url="http://service",
                      raise_server_exceptions=False)


def _post(server: str | None, path: str, payload: dict) -> dict:
    with _client(server) as client:
        resp = client.post(path, json=payload)
    return _handle(resp)


def _get(server: str | None, path: str) -> dict:
    with _client(server) as client:
        resp = client.get(path)
    return _handle(resp)


def _handle(resp: httpx.Response) -> dict:
    if resp.status_code == 200:
        return resp.json()
    try:
        body = resp.json()
    except ValueError:
        body = {"error_type": "unknown", "detail": resp.text}
    click.echo(json.dumps(body, sort_keys=True), err=True)
    if resp.status_code in (400, 422):
        sys.exit(EXIT_CONFIG)
    if body.get("error_type") == "numerics":
        sys.exit(EXIT_NUMERICS)
    sys.exit(1)


def _merge_config(ctx: click.Context, config: str | None,
                  payload: dict) -> dict:
    """Config-file values, overridden by flags the user actually passed."""
    if config is None:
        return payload
    with open(config) as fh:
        base = json.load(fh)
    if not isinstance(base, dict):
        raise click.ClickException("config file must hold a JSON object")
    from click.core import ParameterSource
    for key, value in payload.items():
        src = ctx.get_parameter_source(_flag_of(key))
        if src is None or src != ParameterSource.DEFAULT or key not in base:
            base[key] = value
    return base


_FLAG_ALIASES = {"grid": "emin", "potential": "preset"}


def _flag_of(key: str) -> str:
    return _FLAG_ALIASES.get(key, key)


def _emit(rows: list[dict], columns: list[str], comments: list[str],
          output: str | None, fmt: str, raw: dict | None = None):
    if fmt == "json":
        text = json.dumps(raw, sort_keys=True, indent=2) + "\n"
    else:
        lines = [SCHEMA_HEADER]
        lines += [f"# {c}" for c in comments]
        lines.append(",".join(columns))
        for row in rows:
            cells = []
            for c in columns:
                v = row.get(c)
                if isinstance(v, float):
                    cells.append(FMT.format(v))
                elif v is None:
                    cells.append("")
                else:
                    cells.append(str(v))
            lines.append(",".join(cells))
        text = "\n".join(lines) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _grid_payload(emin, emax, points, log) -> dict:
    return {"e_min_eV": emin, "e_max_eV": emax, "points": points, "log": log}


_common = [
    click.option("--server", default=None,
                 help="Base URL of a running service (default: in-process)."),
    click.option("--config", default=None, type=click.Path(exists=True),
                 help="JSON request file; explicit flags override it."),
    click.option("--output", "-o", default=None, help="Output file path."),
    click.option("--format", "fmt", default="csv",
                 type=click.Choice(["csv", "json"])),
]


def common_options(f):
    for opt in reversed(_common):
        f = opt(f)
    return f


@click.group()
def main():
    """1D tunneling toolkit: exact transmission, poles, dwell times,
    wave packets, and parameter sweeps."""


@main.command()
@click.option("--preset", default="2bwb", help="Built-in potential name.")
@click.option("--emin", default=1e-8, type=float)
@click.option("--emax", default=0.24, type=float)
@click.option("--points", default=400, type=int)
@click.option("--log/--linear", default=True)
@click.option("--one-pole", is_flag=True,
              help="Add the one-pole model column (Eq.-(5)-style).")
@click.option("--expansion-n", default=None, type=int,
              help="Add a pole-expansion column using N poles.")
@common_options
@click.pass_context
def transmit(ctx, preset, emin, emax, points, log, one_pole, expansion_n,
             server, config, output, fmt):
    """Exact transmission curve, optionally with model columns."""
    payload = {
        "potential": {"kind": "preset", "name": preset},
        "grid": _grid_payload(emin, emax, points, log),
        "include_one_pole": one_pole,
        "expansion_n": expansion_n,
    }
    payload = _merge_config(ctx, config, payload)
    data = _post(server, "/transmit", payload)
    cols = ["E_eV", "T", "theta_rad"]
    if any("T_one_pole" in r for r in data["rows"]):
        cols.append("T_one_pole")
    if any("T_expansion" in r for r in data["rows"]):
        cols.append("T_expansion")
    comments = [f"label={data['label']}", f"L_nm={FMT.format(data['L_nm'])}"]
    if data.get("E_q_eV") is not None:
        comments.append(f"E_q_eV={FMT.format(data['E_q_eV'])}")
    _emit(data["rows"], cols, comments, output, fmt, data)


@main.command()
@click.option("--preset", default="2bwb")
@click.option("--n-poles", default=50, type=int)
@click.option("--threshold-only", is_flag=True)
@common_options
@click.pass_context
def poles(ctx, preset, n_poles, threshold_only, server, config, output, fmt):
    """Complex poles of t(k); optionally just the near-threshold pole."""
    payload = {
        "potential": {"kind": "preset", "name": preset},
        "n_poles": n_poles,
        "threshold_only": threshold_only,
    }
    payload = _merge_config(ctx, config, payload)
    data = _post(server, "/poles", payload)
    cols = ["re_k_per_nm", "im_k_per_nm", "kind", "E_re_eV", "E_im_eV",
            "residue_re", "residue_im"]
    comments = [f"label={data['label']}", f"L_nm={FMT.format(data['L_nm'])}",
                f"complete={data['complete']}"]
    if data.get("winding_count") is not None:
        comments.append(f"winding_count={data['winding_count']}")
    if data.get("E_q_eV") is not None:
        comments.append(f"E_q_eV={FMT.format(data['E_q_eV'])}")
    rows = data["poles"]
    if data.get("threshold") is not None:
        th = data["threshold"]
        comments.append("threshold_kind=" + th["kind"])
        comments.append("threshold_im_k_per_nm="
                        + FMT.format(th["im_k_per_nm"]))
        if threshold_only:
            rows = [th]
    _emit(rows, cols, comments, output, fmt, data)


@main.command()
@click.option("--preset", default="2bwb")
@click.option("--emin", default=0.012, type=float)
@click.option("--emax", default=0.12, type=float)
@click.option("--points", default=60, type=int)
@click.option("--log/--linear", default=True)
@common_options
@click.pass_context
def dwell(ctx, preset, emin, emax, points, log, server, config, output, fmt):
    """Dwell time (integral and decomposed) over an energy grid."""
    payload = {
        "potential": {"kind": "preset", "name": preset},
        "grid": _grid_payload(emin, emax, points, log),
    }
    payload = _merge_config(ctx, config, payload)
    data = _post(server, "/dwell", payload)
    cols = ["E_eV", "tau_dwell_fs", "tau_decomposed_fs", "tau_free_fs",
            "ratio", "T_term", "transmission_time_term",
            "reflection_time_term", "interference_term"]
    comments = [f"label={data['label']}", f"L_nm={FMT.format(data['L_nm'])}"]
    _emit(data["rows"], cols, comments, output, fmt, data)


@main.command()
@click.option("--preset", default="2bwb")
@click.option("--sigma", default=0.5, type=float, help="Width sigma in nm.")
@click.option("--x0", default=-5.0, type=float, help="Launch center in nm.")
@click.option("--e0", default=0.06, type=float, help="Center energy in eV.")
@click.option("--x", default=100.0, type=float, help="Probe point in nm.")
@click.option("--t-max", default=2.0, type=float,
              help="Trace length in units of t0=(x-x0)/v0.")
@click.option("--points", default=400, type=int)
@common_options
@click.pass_context
def packet(ctx, preset, sigma, x0, e0, x, t_max, points, server, config,
           output, fmt):
    """Gaussian packet comparison at a probe point (invisibility test)."""
    payload = {
        "potential": {"kind": "preset", "name": preset},
        "sigma_nm": sigma, "x0_nm": x0, "E0_eV": e0, "x_nm": x,
        "t_max_over_t0": t_max, "points": points,
    }
    payload = _merge_config(ctx, config, payload)
    data = _post(server, "/packet", payload)
    cols = ["t_fs", "t_over_t0", "xi", "rho_free", "abs_psi_sq"]
    comments = [f"label={data['label']}",
                f"t0_fs={FMT.format(data['t0_fs'])}",
                "invisibility_score="
                + FMT.format(data["invisibility_score"]),
                "truncated_weight=" + FMT.format(data["truncated_weight"])]
    comments += [f"note={n}" for n in data["notes"]]
    _emit(data["rows"], cols, comments, output, fmt, data)


@main.command()
@click.option("--family", default="2bwb")
@click.option("--axis", default="V",
              type=click.Choice(["V", "mass_ratio", "widths_scale"]))
@click.option("--axis-min", default=-0.2, type=float)
@click.option("--axis-max", default=0.2, type=float)
@click.option("--axis-points", default=200, type=int)
@click.option("--emin", default=0.006, type=float)
@click.option("--emax", default=0.12, type=float)
@click.option("--points", default=200, type=int)
@click.option("--log/--linear", default=True)
@click.option("--band", nargs=2, type=float, default=None,
              help="Energy band [lo hi] for window extraction.")
@click.option("--t-min", default=0.99, type=float)
@common_options
@click.pass_context
def sweep(ctx, family, axis, axis_min, axis_max, axis_points, emin, emax,
          points, log, band, t_min, server, config, output, fmt):
    """Transmission contour over a family axis plus window extraction."""
    payload = {
        "family": family, "axis": axis,
        "axis_min": axis_min, "axis_max": axis_max,
        "axis_points": axis_points,
        "grid": _grid_payload(emin, emax, points, log),
        "band_eV": list(band) if band else None,
        "T_min": t_min,
    }
    payload = _merge_config(ctx, config, payload)
    data = _post(server, "/sweep", payload)
    cols = ["axis_value", "E_eV", "T"]
    comments = [f"family={data['family']}", f"axis={data['axis']}"]
    if data.get("windows") is not None:
        for lo, hi in data["windows"]:
            comments.append(f"window={FMT.format(lo)}:{FMT.format(hi)}")
    _emit(data["rows"], cols, comments, output, fmt, data)


@main.command()
@common_options
@click.pass_context
def presets(ctx, server, config, output, fmt):
    """List the built-in potentials."""
    data = _get(server, "/presets")
    cols = ["name", "label", "L_nm", "n_slices"]
    _emit(data["presets"], cols, [], output, fmt, data)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn
    from .service import app
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
