from ocaseq.dynsys import cycle_decomposition
from ocaseq.ca import LocalRule
from ocaseq.enumeration import search_bipermutive
from ocaseq.plots import save_cycle_length_chart, save_max_cycle_histogram


def test_histogram_figure(tmp_path):
    report = search_bipermutive(4)
    path = tmp_path / "hist.png"
    save_max_cycle_histogram(report, str(path))
    assert path.stat().st_size > 0


def test_cycle_chart_figure(tmp_path):
    decomp = cycle_decomposition(LocalRule(3, 90), LocalRule(3, 150))
    path = tmp_path / "cycles.png"
    save_cycle_length_chart(decomp, str(path), title="rules 90 and 150")
    assert path.stat().st_size > 0
