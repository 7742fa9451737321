"""
Report Generator
Markdown summary next to the JSON run report.
"""

import logging
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

from .instance_io import RunReport, save_report

logger = logging.getLogger(__name__)


def _fmt(value: Optional[float], digits: int = 6) -> str:
    return 'n/a' if value is None else f"{value:.{digits}f}"


def _case_section(report: RunReport) -> List[str]:
    lines = ["## Case Optima\n", "| Case | Correct probability |", "|------|---------------------|"]
    labels = {'P1': 'Case 1 (both encoded)', 'P2': 'Case 2 (X blind)', 'P3': 'Case 3 (blind guess)'}
    for key, label in labels.items():
        lines.append(f"| {label} | {_fmt(report.case_optima.get(key))} |")
    lines.append(f"\n- **p_max:** {_fmt(report.case_optima.get('p_max'))}")
    for key, entry in report.search.items():
        lines.append(
            f"- **{key} search:** {entry['method']}, {entry['candidates_evaluated']:,} candidates"
            + (f", {entry['restarts']} restarts" if entry.get('restarts') else '')
        )
    lines.append("\n---\n")
    return lines


def _bounds_section(report: RunReport) -> List[str]:
    lines = ["## Bounds\n"]
    for key, bits in report.mi_bits.items():
        lines.append(f"- **I(X; {key}):** {bits:.6f} bits")

    main = [b for b in report.bounds if b.get('kind') in ('optimized', 'at_nu', 'grid')]
    if main:
        lines.append("\n| Kind | nu | Thm bound | Cor bound | Exact P_c | Slack |")
        lines.append("|------|----|-----------|-----------|-----------|-------|")
        for b in main[:25]:
            flag = ' ⚠️ degenerate' if b.get('degenerate_flag') else ''
            lines.append(
                f"| {b['kind']}{flag} | {_fmt(b.get('nu'))} | {_fmt(b.get('thm1_bound'))} | "
                f"{_fmt(b.get('cor_bound'))} | {_fmt(b.get('exact_pc'))} | {_fmt(b.get('slack'))} |"
            )
        if len(main) > 25:
            lines.append(f"\n_{len(main) - 25} more rows in the JSON report_")

    spectrum = [b for b in report.bounds if b.get('kind') == 'spectrum']
    if spectrum:
        lines.append("\n| eta | Spectrum bound | Exact P_c |")
        lines.append("|-----|----------------|-----------|")
        for b in spectrum:
            lines.append(f"| {b['eta']:g} | {_fmt(b['prop1_rhs'])} | {_fmt(b['exact_pc'])} |")
    lines.append("\n---\n")
    return lines


def _verification_section(report: RunReport) -> List[str]:
    lines = ["## Verification\n", "| Check | Checked | Violations |", "|-------|---------|------------|"]
    for name, counts in sorted(report.verification.items()):
        emoji = '✅' if counts['violations'] == 0 else '❌'
        lines.append(f"| {name} | {counts['checked']:,} | {emoji} {counts['violations']} |")
    lines.append("\n---\n")
    return lines


def render_markdown(report: RunReport) -> str:
    """Markdown summary of one run"""
    lines = [f"# Guess-Leak Report: {report.command}"]
    lines.append(f"\n**Generated:** {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    if report.instance.get('name'):
        lines.append(f"**Instance:** {report.instance['name']}")
    lines.append(f"**Wall time:** {report.wall_time_seconds:.2f}s")
    lines.append(f"**Version:** {report.tool_version}")
    lines.append("\n---\n")

    if report.case_optima:
        lines.extend(_case_section(report))
    if report.mi_bits or report.bounds:
        lines.extend(_bounds_section(report))
    if report.verification:
        lines.extend(_verification_section(report))

    if report.instance:
        lines.append("## Instance\n")
        for key, value in report.instance.items():
            lines.append(f"- **{key}:** {value}")
        lines.append("")
    return '\n'.join(lines)


def generate_run_report(report: RunReport, output_path: Path) -> Dict[str, Path]:
    """Write <output_path> as JSON and a Markdown summary alongside it"""
    json_path = save_report(report, Path(output_path))
    md_path = json_path.with_suffix('.md')
    with open(md_path, 'w', encoding='utf-8') as f:
        f.write(render_markdown(report))
    logger.info(f"Saved summary: {md_path}")
    return {'json': json_path, 'markdown': md_path}
