import json

import pytest

from antjam.engine import RunReport, SearchSummary
from antjam.reporting import (
    COMPARE_COLUMNS,
    SWEEP_COLUMNS,
    compare_csv_bytes,
    emit_report,
    fmt6,
    report_csv_bytes,
    report_dict,
    report_json_bytes,
    round6,
    sweep_csv_bytes,
    write_bytes,
)


def make_report(seed=1, pdr=0.875, delay=2.0, reroutes=1, sent=8, delivered=7,
                dropped=1, peak=2):
    return RunReport(
        seed=seed,
        duration=10,
        sent=sent,
        delivered=delivered,
        dropped=dropped,
        in_flight=sent - delivered - dropped,
        pdr=pdr,
        mean_delay=delay,
        reroutes=reroutes,
        jammed_peak=peak,
        energy_spent={0: 4.0, 1: 3.123456789, 2: 0.0},
        jammed_per_step=[0, 1, 2, 1],
        searches=[SearchSummary(step=-1, source=0, found=True,
                                best_score=0.06764567891, successes=120)],
        trace=[[0, 1, 0, 0, 1, 0], [1, 2, 1, 0, 1, 1]],
    )


class TestNumberFormatting:
    def test_six_significant_digits(self):
        assert fmt6(0.123456789) == "0.123457"
        assert fmt6(1234567.0) == "1.23457e+06"
        assert fmt6(2.0) == "2"
        assert fmt6(0.0001234567) == "0.000123457"

    def test_round6_is_idempotent(self):
        for value in (0.123456789, 1e-7, 987654.321, 0.0):
            assert round6(round6(value)) == round6(value)


class TestRunReportSerialization:
    def test_dict_key_order_is_fixed(self):
        d = report_dict(make_report())
        assert list(d) == [
            "seed", "duration", "sent", "delivered", "dropped", "in_flight",
            "pdr", "mean_delay", "reroutes", "jammed_peak", "energy_spent",
            "jammed_per_step", "searches", "trace",
        ]

    def test_floats_are_rounded(self):
        d = report_dict(make_report())
        assert d["energy_spent"]["1"] == 3.12346
        assert d["searches"][0]["best_score"] == 0.0676457

    def test_json_round_trips_and_ends_with_newline(self):
        payload = report_json_bytes(make_report())
        assert payload.endswith(b"\n")
        parsed = json.loads(payload)
        assert parsed["seed"] == 1
        assert parsed["trace"] == [[0, 1, 0, 0, 1, 0], [1, 2, 1, 0, 1, 1]]

    def test_csv_single_run(self):
        lines = report_csv_bytes(make_report()).decode().splitlines()
        assert lines[0] == ",".join(SWEEP_COLUMNS)
        assert lines[1] == "1,0.875,2,1,8,7,1,2"
        assert len(lines) == 2


class TestSweepCsv:
    def test_rows_and_trailers(self):
        reports = [
            make_report(seed=0, pdr=0.5, delay=2.0, sent=10, delivered=5,
                        dropped=5, reroutes=0, peak=1),
            make_report(seed=1, pdr=1.0, delay=4.0, sent=10, delivered=10,
                        dropped=0, reroutes=2, peak=3),
        ]
        lines = sweep_csv_bytes(reports).decode().splitlines()
        assert len(lines) == 6  # header, two seeds, mean, min, max
        assert lines[0] == ",".join(SWEEP_COLUMNS)
        assert lines[1].startswith("0,0.5,2,0,")
        assert lines[3] == "mean,0.75,3,1,10,7.5,2.5,2"
        assert lines[4] == "min,0.5,2,0,10,5,0,1"
        assert lines[5] == "max,1,4,2,10,10,5,3"

    def test_empty_sweep_rejected(self):
        with pytest.raises(ValueError):
            sweep_csv_bytes([])


class TestCompareCsv:
    def test_paired_rows(self):
        pairs = [
            (make_report(seed=0, pdr=0.9, delay=3.0, reroutes=1),
             make_report(seed=0, pdr=0.4, delay=2.0, reroutes=0)),
        ]
        lines = compare_csv_bytes(pairs).decode().splitlines()
        assert lines[0] == ",".join(COMPARE_COLUMNS)
        assert lines[1] == "0,0.9,0.4,0.5,3,2,1"

    def test_mismatched_seeds_rejected(self):
        pairs = [(make_report(seed=0), make_report(seed=1))]
        with pytest.raises(ValueError):
            compare_csv_bytes(pairs)

    def test_empty_compare_rejected(self):
        with pytest.raises(ValueError):
            compare_csv_bytes([])


class TestEmission:
    def test_write_to_file(self, tmp_path):
        target = tmp_path / "r.json"
        report = make_report()
        n = emit_report(report, "json", str(target))
        assert target.read_bytes() == report_json_bytes(report)
        assert n == len(report_json_bytes(report))

    def test_unknown_format_rejected(self):
        with pytest.raises(ValueError):
            emit_report(make_report(), "yaml", None)

    def test_stdout_fallback(self, capsysbinary):
        payload = report_csv_bytes(make_report())
        write_bytes(payload, None)
        assert capsysbinary.readouterr().out == payload

    def test_dash_means_stdout(self, capsysbinary):
        write_bytes(b"x,y\n", "-")
        assert capsysbinary.readouterr().out == b"x,y\n"
