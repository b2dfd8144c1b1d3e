"""
HTML Report Generator
Renders a summary JSON as tables (no charts)
"""
import os
from typing import Dict

from jinja2 import Template


class HTMLReportGenerator:
    """Generates HTML reports from experiment summaries"""

    def __init__(self):
        self.template = self._get_template()

    def generate(self, summary: Dict, output_path: str) -> str:
        html_content = self.template.render(summary=summary)

        directory = os.path.dirname(output_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(output_path, 'w', encoding='utf-8') as f:
            f.write(html_content)

        return output_path

    def _get_template(self) -> Template:
        return Template('''
<!DOCTYPE html>
<html lang="en">
<head>
    <meta charset="UTF-8">
    <title>Weak Tomography Report - {{ summary.experiment }}</title>
    <style>
        * { box-sizing: border-box; margin: 0; padding: 0; }
        body {
            font-family: -apple-system, BlinkMacSystemFont, 'Segoe UI', Roboto, sans-serif;
            background: #0a0a0a;
            color: #e5e5e5;
            line-height: 1.6;
            padding: 2rem;
        }
        .container { max-width: 1200px; margin: 0 auto; }
        h1 { color: #fff; margin-bottom: 0.5rem; }
        h2 { color: #a3a3a3; font-size: 1.25rem; margin: 2rem 0 1rem; }
        .meta { color: #737373; font-size: 0.875rem; }
        .card {
            background: #171717;
            border: 1px solid #262626;
            border-radius: 0.75rem;
            padding: 1.5rem;
            margin-top: 1rem;
            overflow-x: auto;
        }
        .win { color: #22c55e; }
        .loss { color: #ef4444; }
        .warning { color: #eab308; }
        table { width: 100%; border-collapse: collapse; }
        th, td { padding: 0.5rem; text-align: right; border-bottom: 1px solid #262626; font-variant-numeric: tabular-nums; }
        th { color: #a3a3a3; font-weight: 500; font-size: 0.875rem; }
    </style>
</head>
<body>
    <div class="container">
        <h1>Weak Tomography Report</h1>
        <p class="meta">
            Experiment: <strong>{{ summary.experiment }}</strong> |
            Pair: {{ summary.pair }} | Engine: {{ summary.engine }} |
            Estimator: {{ summary.estimator }} | Seed: {{ summary.seed }}
        </p>
        <p class="meta">
            {{ summary.tool }} {{ summary.version }} | config {{ summary.config_hash[:16] }} |
            {{ summary.states }} states, {{ summary.rows }} cells, {{ summary.degenerate_runs }} degenerate runs |
            std: {{ summary.std_convention }}
        </p>

        {% for warning in summary.warnings %}
        <p class="warning">{{ warning }}</p>
        {% endfor %}

        {% if summary.scores %}
        <h2>Score</h2>
        {% for n, rows in summary.scores.items() %}
        <div class="card">
            <p class="meta">N = {{ n }} | threshold a:
                {% if summary.thresholds[n] is not none %}{{ summary.thresholds[n] }}{% else %}not reached{% endif %}</p>
            <table>
                <thead><tr><th>a</th>{% if rows and rows[0].eps is not none %}<th>eps</th>{% endif %}<th>wins</th><th>total</th><th>fraction</th></tr></thead>
                <tbody>
                    {% for r in rows %}
                    <tr>
                        <td>{{ r.a }}</td>
                        {% if r.eps is not none %}<td>{{ r.eps }}</td>{% endif %}
                        <td>{{ r.wins }}</td>
                        <td>{{ r.total }}</td>
                        <td class="{% if r.fraction > 0.5 %}win{% else %}loss{% endif %}">{{ "%.3f"|format(r.fraction) }}</td>
                    </tr>
                    {% endfor %}
                </tbody>
            </table>
        </div>
        {% endfor %}
        {% endif %}

        <h2>Mean fidelity over states</h2>
        {% for n, s in summary.series.items() %}
        <div class="card">
            <p class="meta">N = {{ n }} | projective baseline: {{ "%.5f"|format(s.baseline_mean) }} (std {{ "%.5f"|format(s.baseline_std) }})</p>
            <table>
                <thead>
                    <tr><th>eps</th>{% for a in s.mean_by_a %}<th>a={{ a }}</th>{% endfor %}</tr>
                </thead>
                <tbody>
                    {% for eps in s.eps %}
                    {% set i = loop.index0 %}
                    <tr>
                        <td>{{ eps }}</td>
                        {% for a, means in s.mean_by_a.items() %}
                        <td class="{% if means[i] > s.baseline_mean %}win{% endif %}">
                            {{ "%.5f"|format(means[i]) }} <span class="meta">± {{ "%.4f"|format(s.std_by_a[a][i]) }}</span>
                        </td>
                        {% endfor %}
                    </tr>
                    {% endfor %}
                </tbody>
            </table>
        </div>
        {% endfor %}

        <h2>Configuration</h2>
        <div class="card">
            <pre style="color: #a3a3a3; text-align: left;">{{ summary.config | tojson(indent=2) }}</pre>
        </div>
    </div>
</body>
</html>
''')
