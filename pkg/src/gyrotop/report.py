"""Versioned JSON report schema shared by every subcommand.

A report is::

    {
      "schema": 1,
      "tool": "gyrotop 0.1.0",
      "subcommand": "...",
      "config": {...},          # echo of the run configuration
      "findings": [
        {"check": id, "verdict": "pass"|"fail", "witness": ..., "margin": ...},
        ...
      ],
      "notes": [...],           # documented expected findings, if any
      "overall": "pass"|"fail"  # fail iff any finding fails
    }

Construction order is fixed and no timestamps are embedded, so repeated
runs with identical configuration render byte-identical reports.
"""

from __future__ import annotations

import json

SCHEMA_VERSION = 1
TOOL = "gyrotop 0.1.0"


def make_finding(check: str, passed: bool, witness=None, margin=None) -> dict:
    return {
        "check": check,
        "verdict": "pass" if passed else "fail",
        "witness": witness,
        "margin": margin,
    }


def build_report(subcommand: str, config: dict, findings: list[dict], notes=()) -> dict:
    overall = "pass" if all(f["verdict"] == "pass" for f in findings) else "fail"
    return {
        "schema": SCHEMA_VERSION,
        "tool": TOOL,
        "subcommand": subcommand,
        "config": config,
        "findings": findings,
        "notes": list(notes),
        "overall": overall,
    }


def render_report(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"
