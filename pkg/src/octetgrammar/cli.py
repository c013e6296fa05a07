"""Command-line surface: derivation, pipeline products, export, report."""

from __future__ import annotations

import sys
from fractions import Fraction

import click

from . import pipeline
from .assembly import fingerprint
from .errors import OctetError
from .framegraph import extract, validate
from .grammar import DerivationScript, enumerate_unique
from .scene import emit_obj, emit_scene, parse_scene, scene_from_assembly


def _fail(exc: OctetError):
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


def _write_scene(assembly, out: str, units: str):
    text = emit_scene(scene_from_assembly(assembly, units=units))
    if out == "-":
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


_units_option = click.option(
    "--units",
    type=click.Choice(["lattice", "feet"]),
    default="lattice",
    show_default=True,
)


@click.group()
def main():
    """Octet-truss shape grammar tools."""


@main.command("enumerate")
@click.option("--pair", default="tetra,octa", show_default=True,
              help="Comma-separated host and incoming species classes.")
@click.option("--relation", type=click.Choice(["face", "edge", "vertex", "all"]),
              default="all", show_default=True)
def enumerate_cmd(pair: str, relation: str):
    """Count and fingerprint the unique two-cell designs of a pair."""
    try:
        left, right = (s.strip() for s in pair.split(","))
        designs = enumerate_unique(left, right, relation)
    except (OctetError, ValueError) as exc:
        _fail(exc)
    click.echo(f"{len(designs)} unique designs for ({left}, {right}) "
               f"under relation {relation}")
    for d in designs:
        click.echo(fingerprint(d).decode())


@main.command()
@click.option("--script", "script_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True)
@_units_option
def derive(script_path: str, out: str, units: str):
    """Replay a derivation script and write the resulting scene."""
    try:
        with open(script_path, encoding="utf-8") as fh:
            script = DerivationScript.from_json(fh.read())
        assembly = pipeline.replay_script(script)
        _write_scene(assembly, out, units)
    except OctetError as exc:
        _fail(exc)


def _product_command(name: str, builder, default_units="lattice"):
    @main.command(name)
    @click.option("--out", required=True)
    @click.option("--units", type=click.Choice(["lattice", "feet"]),
                  default=default_units, show_default=True)
    def cmd(out: str, units: str):
        try:
            _write_scene(builder(), out, units)
        except OctetError as exc:
            _fail(exc)

    cmd.__doc__ = builder.__doc__
    return cmd


_product_command("unit", pipeline.fundamental_unit)
_product_command("half-module", pipeline.half_module)
_product_command("hex-module", pipeline.hexagonal_module)


@main.command()
@click.option("--radius", required=True)
@click.option("--out", required=True)
@_units_option
def plate(radius: str, out: str, units: str):
    """Hexagonal floor plate of one layer."""
    try:
        _write_scene(pipeline.floor_plate(Fraction(radius)), out, units)
    except (OctetError, ValueError) as exc:
        _fail(exc)


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True)
@click.option("--units", type=click.Choice(["lattice", "feet"]),
              default="feet", show_default=True)
def tower(config_path: str, out: str, units: str):
    """Build a tower from a JSON parameter file."""
    try:
        with open(config_path, encoding="utf-8") as fh:
            params = pipeline.TowerParams.from_json(fh.read())
        _write_scene(pipeline.build_tower(params), out, units)
    except OctetError as exc:
        _fail(exc)


@main.command()
@click.option("--scene", "scene_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--obj", "obj_path", required=True)
@click.option("--frame/--cells", "as_frame", default=True,
              help="Export the frame as lines or the cells as faces.")
def export(scene_path: str, obj_path: str, as_frame: bool):
    """Convert a scene to Wavefront OBJ."""
    try:
        with open(scene_path, encoding="utf-8") as fh:
            scene = parse_scene(fh.read())
        emit_obj(scene, obj_path, mode="frame" if as_frame else "cells")
    except OctetError as exc:
        _fail(exc)


@main.command("validate")
@click.option("--scene", "scene_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
def validate_cmd(scene_path: str):
    """Run the truss checks on a scene's frame graph."""
    try:
        with open(scene_path, encoding="utf-8") as fh:
            scene = parse_scene(fh.read())
        from .framegraph import FrameGraph

        nodes = tuple(tuple(n) for n in scene.frame["nodes"])
        exact = all(
            isinstance(c, int) for n in scene.frame["nodes"] for c in n
        )
        members = tuple(tuple(m) for m in scene.frame["members"])
        graph = FrameGraph(nodes, members, tuple(() for _ in members), exact)
        report = validate(graph)
    except OctetError as exc:
        _fail(exc)
    click.echo(f"nodes: {report.node_count} "
               f"(interior {report.interior_node_count})")
    click.echo(f"members: {report.member_count}")
    for check in ("uniform_lengths", "interior_valence_ok", "connected",
                  "fully_triangulated"):
        click.echo(f"{check}: {'ok' if getattr(report, check) else 'FAIL'}")
    for failure in report.failures:
        click.echo(f"  {failure}")
    if not report.ok:
        sys.exit(1)


@main.command()
@click.option("--scene", "scene_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--outdir", required=True)
def report(scene_path: str, outdir: str):
    """Render plan/elevation figures and a metrics CSV for a scene."""
    from .report import generate_report

    try:
        with open(scene_path, encoding="utf-8") as fh:
            scene = parse_scene(fh.read())
        outputs = generate_report(scene, outdir)
    except OctetError as exc:
        _fail(exc)
    for path in outputs:
        click.echo(path)


@main.command()
@click.option("--port", default=8787, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(port: int, host: str):
    """Start the interactive derivation session service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
