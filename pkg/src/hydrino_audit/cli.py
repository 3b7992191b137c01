"""Command-line entry point: ``audit run-all``, ``audit claim C5``,
``audit parse-expr``, ``audit hydrino-table``, ``audit radial`` and
``audit radial-scan``."""
from __future__ import annotations

import json
import sys

import click

from .claims import CLAIMS, report_to_json, report_to_text, run_all, run_claim
from .config import load_config
from .hydrogen import hydrino_table
from .parser import ParseError, parse_expr, print_expr
from .radial import admissibility, eigenvalue_scan


def _config_option(fn):
    return click.option("--config", "config_path", default=None,
                        type=click.Path(exists=True, dir_okay=False),
                        help="TOML config file overriding the defaults.")(fn)


@click.group()
def main():
    """Symbolic-numeric audit of the hydrino model's mathematical claims."""


@main.command("run-all")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@_config_option
def run_all_cmd(fmt, config_path):
    """Run claims C1..C9 and print the report; exit 0 iff all verdicts match."""
    cfg = load_config(config_path)
    report = run_all(cfg)
    click.echo(report_to_json(report) if fmt == "json" else report_to_text(report))
    sys.exit(0 if report.all_match else 1)


@main.command("claim")
@click.argument("claim_id")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@_config_option
def claim_cmd(claim_id, fmt, config_path):
    """Run a single claim by id (C1..C9)."""
    claim_id = claim_id.upper()
    if claim_id not in CLAIMS:
        raise click.BadParameter(f"unknown claim id {claim_id!r} (valid: C1..C9)")
    cfg = load_config(config_path)
    result = run_claim(claim_id, cfg)
    claim = CLAIMS[claim_id]
    if fmt == "json":
        click.echo(json.dumps({
            "id": claim_id,
            "description": claim.description,
            "anchor": claim.anchor,
            "expected": claim.expected,
            "computed": result.computed,
            "evidence": {k: v for k, v in result.evidence},
            "notes": result.notes,
        }, indent=2))
    else:
        click.echo(f"{claim_id}: {claim.description}")
        click.echo(f"  expected: {claim.expected}")
        click.echo(f"  computed: {result.computed}")
        for k, v in result.evidence:
            click.echo(f"  {k} = {v:.12g}")
        for n in result.notes:
            click.echo(f"  note: {n}")
    sys.exit(0 if result.computed == claim.expected else 1)


@main.command("parse-expr")
@click.argument("expression")
def parse_expr_cmd(expression):
    """Parse an expression and print its canonical form."""
    try:
        tree = parse_expr(expression)
    except ParseError as exc:
        click.echo(f"error: {exc.message}", err=True)
        click.echo(f"  {expression}", err=True)
        click.echo("  " + " " * exc.span.start +
                   "^" * max(1, exc.span.end - exc.span.start), err=True)
        if exc.expected:
            click.echo(f"  expected: {', '.join(exc.expected)}", err=True)
        sys.exit(2)
    click.echo(print_expr(tree))


@main.command("hydrino-table")
@click.option("--k-max", default=200, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@_config_option
def hydrino_table_cmd(k_max, fmt, config_path):
    """Reciprocal-radius level table with the speed-of-light cutoff."""
    cfg = load_config(config_path)
    table = hydrino_table(k_max, cfg.constants)
    if fmt == "json":
        click.echo(json.dumps([
            {
                "k": lv.k,
                "q": f"1/{lv.k}",
                "radius_m": lv.radius,
                "binding_energy_eV": lv.binding_energy,
                "orbital_velocity_m_s": lv.orbital_velocity,
                "subluminal": lv.subluminal,
            } for lv in table
        ], indent=2))
        return
    click.echo(f"{'k':>5} {'q':>8} {'radius [m]':>14} {'binding [eV]':>14} "
               f"{'velocity [m/s]':>15} {'subluminal':>10}")
    for lv in table:
        click.echo(f"{lv.k:>5} {f'1/{lv.k}':>8} {lv.radius:>14.6e} "
                   f"{lv.binding_energy:>14.6g} {lv.orbital_velocity:>15.6e} "
                   f"{'yes' if lv.subluminal else 'no':>10}")


@main.command("radial")
@click.option("--nu", required=True, type=float)
@click.option("--l", "l", default=0, show_default=True, type=int)
@click.option("--json", "as_json", is_flag=True, default=False)
@_config_option
def radial_cmd(nu, l, as_json, config_path):
    """Admissibility verdict for the radial problem at (nu, l)."""
    cfg = load_config(config_path)
    v = admissibility(nu, l, wronskian_tol=cfg.wronskian_zero_tol,
                      rtol=cfg.radial_rtol)
    if as_json:
        click.echo(json.dumps({
            "nu": v.nu, "l": v.l,
            "admissible": v.admissible,
            "criteria": {
                "square_integrable": v.square_integrable,
                "origin_regular": v.origin_regular,
                "decaying_at_infinity": v.decaying_at_infinity,
            },
            "failure_modes": v.failure_modes,
            "normalized_wronskian": v.wronskian,
            "origin_exponent": v.origin_exponent,
        }, indent=2))
        return
    click.echo(f"nu = {v.nu}, l = {v.l}: "
               + ("admissible" if v.admissible else "NOT admissible"))
    click.echo(f"  square-integrable:    {v.square_integrable}")
    click.echo(f"  origin-regular:       {v.origin_regular}")
    click.echo(f"  decaying-at-infinity: {v.decaying_at_infinity}")
    click.echo(f"  normalized Wronskian: {v.wronskian:.3e}")
    for m in v.failure_modes:
        click.echo(f"  failure: {m}")


@main.command("radial-scan")
@click.option("--nu-min", required=True, type=float)
@click.option("--nu-max", required=True, type=float)
@click.option("--steps", required=True, type=int)
@click.option("--l", "l", default=0, show_default=True, type=int)
@_config_option
def radial_scan_cmd(nu_min, nu_max, steps, l, config_path):
    """Scan the normalized Wronskian for eigenvalues of nu."""
    cfg = load_config(config_path)
    zeros = eigenvalue_scan(nu_min, nu_max, steps, l=l,
                            r_match=cfg.scan_r_match,
                            r_max_factor=cfg.scan_r_max_factor,
                            rtol=cfg.scan_rtol)
    click.echo(f"eigenvalues of nu in [{nu_min}, {nu_max}] at l={l}: "
               f"{len(zeros)} found")
    for z in zeros:
        click.echo(f"  nu = {z:.6f}")


if __name__ == "__main__":
    main()
