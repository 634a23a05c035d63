"""isingff command line: series, correlations, verification suites,
quadrature values and plot data.

Exit codes: 0 ok, 1 a check failed, 2 bad usage, 3 two routes disagreed.
"""
from __future__ import annotations

import csv
import io
import json
import re
import sys
from typing import Optional

import click
from flint import fmpq

from .algebra import rat, rat_str

EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INCONSISTENT = 3


class RouteMismatch(click.ClickException):
    exit_code = EXIT_INCONSISTENT


class Usage(click.ClickException):
    exit_code = EXIT_USAGE


def _read_config(ctx, param, path):
    """key=value lines become defaults; explicit flags still win."""
    if not path:
        return path
    defaults = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise click.BadParameter(f"expected key=value, got '{line}'", param=param)
            k, v = (x.strip() for x in line.split("=", 1))
            defaults[k.replace("-", "_")] = v
    ctx.default_map = {**(ctx.default_map or {}), **defaults}
    for cmd in ("ff", "corr", "verify", "quad", "plotdata"):
        ctx.default_map.setdefault(cmd, {}).update(defaults)
    return path


def _exp_str(e_halves: int) -> str:
    return str(e_halves // 2) if e_halves % 2 == 0 else f"{e_halves}/2"


def _series_rows(s):
    return [(_exp_str(e), rat_str(c)) for e, c in s.items()]


def _emit(ctx, payload: dict, rows=None, header=None, comment: Optional[str] = None):
    fmt, out = ctx.obj["format"], ctx.obj["out"]
    if fmt == "json":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        if comment:
            buf.write(f"# {comment}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _guard(fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except (ValueError, KeyError, ZeroDivisionError) as exc:
        raise Usage(str(exc)) from None


def _override(key):
    def cb(ctx, param, value):
        if value is not None:
            ctx.ensure_object(dict)[key] = value
        return value
    return cb


def global_flags(f):
    """Let the group's flags also follow the subcommand name."""
    opts = [
        click.option("--order", type=click.IntRange(min=2), default=None, expose_value=False,
                     callback=_override("order"), help="Series are returned below t^order."),
        click.option("--format", type=click.Choice(["json", "csv"]), default=None,
                     expose_value=False, callback=_override("format"), help="Output format."),
        click.option("--out", type=click.Path(dir_okay=False), default=None, expose_value=False,
                     callback=_override("out"), help="Output file."),
        click.option("--seed", type=int, default=None, expose_value=False,
                     callback=_override("seed"), help="Seed for Monte Carlo."),
        click.option("--jobs", type=click.IntRange(min=1), default=None, expose_value=False,
                     callback=_override("jobs"), help="Worker processes."),
    ]
    for o in reversed(opts):
        f = o(f)
    return f


@click.group()
@click.option("--order", type=click.IntRange(min=2), default=20, show_default=True,
              help="Series are returned below t^order.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None,
              help="Output format (json by default, csv for plotdata).")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write to this file instead of stdout.")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for Monte Carlo.")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True,
              help="Worker processes for verification suites.")
@click.option("--config", type=click.Path(exists=True, dir_okay=False), callback=_read_config,
              is_eager=True, expose_value=False, help="key=value file with default settings.")
@click.pass_context
def main(ctx, order, fmt, out, seed, jobs):
    """Exact and numerical routes to diagonal Ising form factors."""
    ctx.ensure_object(dict)
    ctx.obj.update(order=order, format=fmt, out=out, seed=seed, jobs=jobs)


def _fmt(ctx, default: str):
    if ctx.obj["format"] is None:
        ctx.obj["format"] = default


# ---------------------------------------------------------------- ff

def _ff_routes(j: int, N: int, order: int):
    from .formfactor import ek_tabulated, ek_table, ek_to_series, f2_nested_series
    from .painleve import expected_leading_exponent, formfactor_series
    from .special import f1_series

    regime = "low" if j % 2 == 0 else "high"
    lead = expected_leading_exponent(regime, N, j // 2)
    work = max(order, lead // 2 + 1)
    tr = 2 * order
    routes = {"recursion": formfactor_series(j, N, work).truncate(tr)}
    if (j, N) in ek_tabulated():
        routes["ek-table"] = ek_to_series(ek_table(j, N), work).truncate(tr)
    if j == 2:
        routes["nested-2f1"] = f2_nested_series(N, work).truncate(tr)
    if j == 1:
        routes["hypergeometric"] = f1_series(N, work).truncate(tr)
    return routes


@main.command()
@click.option("--j", "j", type=click.IntRange(min=1), required=True, help="Particle number.")
@click.option("--N", "N", type=click.IntRange(min=0), required=True, help="Diagonal distance.")
@global_flags
@click.pass_context
def ff(ctx, j, N):
    """Series of f^(j)_{N,N}, cross-checked over every available route."""
    _fmt(ctx, "json")
    order = ctx.obj["order"]
    routes = _guard(_ff_routes, j, N, order)
    names = list(routes)
    ref = routes[names[0]]
    for name in names[1:]:
        if not routes[name].agrees(ref, 2 * order):
            raise RouteMismatch(f"routes '{names[0]}' and '{name}' disagree for f^({j})_{{{N},{N}}}")
    rows = _series_rows(ref)
    payload = {"j": j, "N": N, "order": order, "route": names[0], "cross_checked": names[1:],
               "terms": [{"exponent": e, "coeff": c} for e, c in rows], "series": ref.to_json()}
    _emit(ctx, payload, rows, ["exponent", "coeff"],
          f"f{j} N={N} route={names[0]} cross_checked={'+'.join(names[1:]) or 'none'} order={order}")


# ---------------------------------------------------------------- corr

@main.command()
@click.option("--regime", type=click.Choice(["low", "high"]), required=True)
@click.option("--N", "N", type=click.IntRange(min=0), required=True)
@click.option("--mu", default="sym", show_default=True, help="lambda^2 as p/q, or 'sym'.")
@global_flags
@click.pass_context
def corr(ctx, regime, N, mu):
    """C(N,N;lambda) from the sigma-form recursion."""
    from .painleve import solve_regime

    _fmt(ctx, "json")
    order = ctx.obj["order"]
    m = None if mu == "sym" else _guard(rat, mu)
    if order <= N + 2:
        order = N + 3
    r = _guard(solve_regime, regime, N, m, order)
    payload = r.to_json()
    if r.mu is None:
        rows = [(_exp_str(e), str(k), rat_str(x)) for e, c in r.corr.items()
                for k, x in enumerate(c.coeffs()) if x != 0]
        header = ["exponent", "mu_power", "coeff"]
    else:
        rows, header = _series_rows(r.corr), ["exponent", "coeff"]
    _emit(ctx, payload, rows, header, f"corr regime={regime} N={N} mu={mu} order={order}")


# ---------------------------------------------------------------- verify

@main.command()
@click.option("--suite", type=click.Choice(["painleve", "operators", "russian-doll", "direct-sum",
                                            "scaling", "algebraic", "quadrature", "all"]),
              default="all", show_default=True)
@click.option("--max-n", type=click.IntRange(1, 4), default=4, show_default=True,
              help="Largest n in F_{2n+1}, F_{2n}.")
@click.option("--max-N", "max_N", type=click.IntRange(0, 3), default=3, show_default=True)
@global_flags
@click.pass_context
def verify(ctx, suite, max_n, max_N):
    """Run a verification suite and print a JSON report."""
    from .checks import run_checks, suite_checks

    _fmt(ctx, "json")
    rows = run_checks(suite_checks(suite, max_n, max_N, ctx.obj["seed"]), ctx.obj["jobs"])
    failures = sum(r["status"] != "pass" for r in rows)
    payload = {"suite": suite, "checks": rows, "failures": failures}
    _emit(ctx, payload, [(r["name"], r["status"], r["detail"]) for r in rows],
          ["name", "status", "detail"], f"suite={suite} failures={failures}")
    if failures:
        ctx.exit(EXIT_FAIL)


# ---------------------------------------------------------------- quad

@main.command()
@click.option("--j", "j", type=click.IntRange(1, 4), required=True)
@click.option("--N", "N", type=click.IntRange(min=0), required=True)
@click.option("--t0", type=float, default=None, help="Point for the t-form integral.")
@click.option("--s0", type=float, default=None, help="Point for the phi-form integral (j = 1, 2).")
@click.option("--M", "M", type=click.IntRange(min=0), default=None, help="Column index for the phi form.")
@click.option("--tol", type=float, default=1e-12, show_default=True)
@click.option("--samples", type=click.IntRange(min=1), default=10 ** 6, show_default=True)
@global_flags
@click.pass_context
def quad(ctx, j, N, t0, s0, M, tol, samples):
    """Numerical value of f^(j) from its integral representation."""
    from . import quadrature as q

    _fmt(ctx, "json")
    if (t0 is None) == (s0 is None):
        raise Usage("give exactly one of --t0 and --s0")
    seed = ctx.obj["seed"]
    if s0 is not None:
        r = _guard(q.ff_phi_integral, j, N if M is None else M, N, s0, tol)
        where = {"s0": s0, "t": q.phi_regime_t(j, s0)}
    elif j == 4:
        r = _guard(q.mc_f4, N, t0, samples, seed)
        where = {"t0": t0}
    else:
        r = _guard(q.ff_t_integral, j, N, t0, tol, samples, seed)
        where = {"t0": t0}
    payload = {"j": j, "N": N, **where, **r.to_json()}
    _emit(ctx, payload, [[payload[k] for k in payload]], list(payload))


# ---------------------------------------------------------------- plotdata

_Q_FF = re.compile(r"^f(\d+)_(\d+)$")
_Q_CORR = re.compile(r"^corr_(low|high)_N(\d+)_(lambda|mu)(\d+)(?:_(\d+))?$")


def parse_quantity(q: str):
    """'f2_00' (j=2, N=0; the digits after '_' are N written twice) or
    'corr_low_N2_lambda1', 'corr_low_N0_mu1_2' (mu = 1/2)."""
    m = _Q_FF.match(q)
    if m:
        j, digits = int(m.group(1)), m.group(2)
        h = len(digits) // 2
        if len(digits) % 2 or digits[:h] != digits[h:] or j < 1:
            raise Usage(f"'{q}': only diagonal f<j>_<N><N> quantities are supported")
        return "ff", j, int(digits[:h]), None
    m = _Q_CORR.match(q)
    if m:
        regime, N, kind, p, d = m.groups()
        val = fmpq(int(p), int(d) if d else 1)
        mu = val * val if kind == "lambda" else val
        return "corr", regime, int(N), mu
    raise Usage(f"unknown quantity '{q}'")


def parse_grid(g: str):
    parts = g.split(":")
    if len(parts) != 3:
        raise Usage("grid must be start:stop:count")
    a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 1 or not (0 < a <= b < 1) or (n == 1 and a != b):
        raise Usage("grid points must lie in (0, 1) and count must be positive")
    return [a + (b - a) * i / (n - 1) for i in range(n)] if n > 1 else [a]


@main.command()
@click.option("--q", "quantity", required=True, help="f2_00, corr_low_N2_lambda1, ...")
@click.option("--grid", default="0.05:0.95:19", show_default=True, help="start:stop:count in t.")
@click.option("--tol", type=float, default=1e-12, show_default=True)
@global_flags
@click.pass_context
def plotdata(ctx, quantity, grid, tol):
    """CSV of (t, value) pairs for a quantity over a grid in t."""
    from .painleve import formfactor_series, solve_regime
    from .quadrature import ff_t_integral

    _fmt(ctx, "csv")
    kind, a, N, mu = parse_quantity(quantity)
    ts = parse_grid(grid)
    order = ctx.obj["order"]
    if kind == "ff" and a in (1, 2):
        route, setting = "gauss-jacobi", f"tol={tol}"
        vals = [_guard(ff_t_integral, a, N, t, tol).value for t in ts]
    else:
        route, setting = "series", f"order={order}"
        if kind == "ff":
            s = _guard(formfactor_series, a, N, order)
        else:
            s = _guard(solve_regime, a, N, mu, max(order, N + 3)).corr
        vals = [s.evaluate_numeric(t)[0] for t in ts]
    rows = [(repr(t), repr(v)) for t, v in zip(ts, vals)]
    payload = {"quantity": quantity, "route": route, "setting": setting,
               "points": [{"t": t, "value": v} for t, v in zip(ts, vals)]}
    _emit(ctx, payload, rows, ["t", quantity], f"quantity={quantity} route={route} {setting}")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
