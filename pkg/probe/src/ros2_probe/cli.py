"""One-shot command line entry point: probe the graph, write the catalog."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .probe import probe_graph, render_catalog


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="probe",
        description="Introspect the ROS 2 graph and write an interface catalog")
    parser.add_argument("--output", default="apidoc.json",
                        help="catalog file to write (default: apidoc.json)")
    parser.add_argument("--settle", type=float, default=2.0,
                        help="seconds to wait for graph discovery (default: 2.0)")
    parser.add_argument("--resource-name", default="ros2",
                        help="resource name recorded in the catalog")
    args = parser.parse_args(argv)

    try:
        output = probe_graph(settle_seconds=args.settle,
                             resource_name=args.resource_name)
    except Exception as exc:  # middleware init failures surface here
        print(f"error: {exc}", file=sys.stderr)
        return 1

    Path(args.output).write_text(render_catalog(output), encoding="utf-8")
    for warning in output.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(f"wrote {len(output.entries)} interfaces -> {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
