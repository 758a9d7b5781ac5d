"""Ingestion, planted generation, bench harness and CLI round trips."""

import json

import numpy as np
import pytest

from centerstring import (
    InstanceFile,
    StringInstance,
    SubstringInstance,
    cost_substring,
    exact_closest_substring,
    generate_planted,
    run_bench,
)
from centerstring.errors import AlphabetMismatch, DomainError
from centerstring.io_cli import main, planted_instance_file


class TestJsonFormat:
    def test_parse_emit_round_trip(self):
        f = InstanceFile("01", ("0101", "1100"), 3, None)
        assert InstanceFile.parse_json(f.emit_json()) == f

    def test_round_trip_with_planted(self):
        f = planted_instance_file("01", 3, 8, 5, 1, 42)
        assert InstanceFile.parse_json(f.emit_json()) == f

    def test_window_selects_instance_type(self):
        f = InstanceFile.parse_json('{"alphabet":"01","strings":["01","10"]}')
        assert isinstance(f.to_instance(), StringInstance)
        f = InstanceFile.parse_json('{"alphabet":"01","strings":["01","10"],"L":1}')
        assert isinstance(f.to_instance(), SubstringInstance)

    def test_alphabet_inferred_when_absent(self):
        f = InstanceFile.parse_json('{"strings":["ba","ab"]}')
        assert f.alphabet == "ab"

    def test_missing_strings_rejected(self):
        with pytest.raises(DomainError):
            InstanceFile.parse_json('{"alphabet":"01"}')


class TestFastaFormat:
    def test_parse_records(self):
        text = ">one\nACGT\nACGT\n>two desc\nTTTT\nACGT\n"
        f = InstanceFile.parse_fasta(text)
        assert f.strings == ("ACGTACGT", "TTTTACGT")
        assert f.alphabet == "ACGT"

    def test_lower_case_normalized(self):
        f = InstanceFile.parse_fasta(">x\nacgt\n")
        assert f.strings == ("ACGT",)

    def test_undeclared_symbol_rejected(self):
        f = InstanceFile.parse_fasta(">x\nACGN\n", alphabet="ACGT")
        with pytest.raises(AlphabetMismatch):
            f.to_instance()

    def test_fasta_and_json_solve_identically(self, tmp_path):
        strings = ["ACGTACG", "TACGTAC", "GACGTAA"]
        fasta = tmp_path / "inst.fa"
        fasta.write_text("".join(f">s{i}\n{s}\n" for i, s in enumerate(strings)))
        jsonf = tmp_path / "inst.json"
        jsonf.write_text(json.dumps({"alphabet": "ACGT", "strings": strings, "L": 4}))
        a = InstanceFile.load(fasta, alphabet="ACGT")
        b = InstanceFile.load(jsonf)
        ia = SubstringInstance.from_texts(a.to_instance().alphabet, a.strings, 4)
        ib = b.to_instance()
        assert exact_closest_substring(ia) == exact_closest_substring(ib)


class TestGeneratePlanted:
    def test_d_zero_plants_verbatim(self):
        inst, meta = generate_planted("01", 4, 10, 5, 0, 7)
        center = meta.center
        for s, off in zip(inst.strings, meta.offsets):
            assert s.text[off:off + 5] == center
        assert exact_closest_substring(inst).radius == 0

    def test_window_equal_length_is_string_case(self):
        inst, meta = generate_planted("01", 3, 6, 6, 1, 9)
        assert meta.offsets == (0, 0, 0)
        assert all(len(s) == 6 for s in inst.strings)

    def test_planted_distance_is_exact(self):
        from centerstring import Seq, hamming

        inst, meta = generate_planted("ACGT", 5, 12, 6, 2, 13)
        center = Seq.from_text(inst.alphabet, meta.center)
        for s, off in zip(inst.strings, meta.offsets):
            assert hamming(center, s.window(off, 6)) == 2

    def test_oracle_bounded_by_d(self):
        for seed in range(5):
            inst, meta = generate_planted("01", 3, 8, 5, 1, seed)
            assert exact_closest_substring(inst).radius <= 1

    def test_deterministic_per_seed(self):
        assert generate_planted("01", 3, 8, 5, 1, 4) == generate_planted("01", 3, 8, 5, 1, 4)
        a, _ = generate_planted("01", 3, 8, 5, 1, 4)
        b, _ = generate_planted("01", 3, 8, 5, 1, 5)
        assert a != b

    def test_parameter_validation(self):
        with pytest.raises(DomainError):
            generate_planted("01", 3, 4, 5, 0, 0)  # L > m
        with pytest.raises(DomainError):
            generate_planted("01", 3, 8, 5, 6, 0)  # d > L


class TestBench:
    def suite(self, count=3):
        return [
            (f"p{seed}", planted_instance_file("01", 3, 8, 5, seed % 2, seed))
            for seed in range(count)
        ]

    def test_empty_suite(self):
        report = run_bench([], ["exact"], timing=False)
        assert report.to_csv() == "instance,seed,algo,r,epsilon,radius,oracle,ratio,ms,status\n"

    def test_planted_zero_gives_unit_ratios(self):
        # L = m so the whole-string algorithm applies as well
        suite = [("z", planted_instance_file("01", 3, 8, 8, 0, 1))]
        report = run_bench(suite, ["exact", "string", "small", "sampling"], timing=False)
        assert all(row.status == "ok" for row in report.rows)
        assert all(row.ratio == "1.0000" for row in report.rows)
        assert report.bounds_ok

    def test_rows_keep_suite_order_under_parallel(self):
        suite = self.suite(4)
        serial = run_bench(suite, ["exact", "small"], timing=False)
        parallel = run_bench(suite, ["exact", "small"], timing=False, parallel=True)
        assert serial.to_csv() == parallel.to_csv()

    def test_error_rows_do_not_abort(self):
        bad = InstanceFile("01", ("0101", "1100"), None, None)  # unequal use below
        suite = [
            ("good", planted_instance_file("01", 3, 8, 5, 0, 1)),
            ("huge", InstanceFile("01", ("0" * 40, "1" * 40), 30, None)),
        ]
        report = run_bench(suite, ["small"], timing=False, oracle_budget=1 << 12)
        statuses = [row.status for row in report.rows]
        assert statuses[0] == "ok"
        assert statuses[1].startswith("error")

    def test_byte_identical_with_fixed_seed(self):
        suite = self.suite()
        a = run_bench(suite, ["exact", "string", "small", "sampling"], seed=5, timing=False)
        b = run_bench(suite, ["exact", "string", "small", "sampling"], seed=5, timing=False)
        assert a.to_csv() == b.to_csv()


class TestCli:
    def test_gen_solve_round_trip(self, tmp_path, capsys):
        out = tmp_path / "inst.json"
        assert main(["gen", "--n", "3", "--m", "8", "--L", "5", "--d", "1",
                     "--seed", "3", "--out", str(out)]) == 0
        assert main(["solve-substring", str(out), "--mode", "small_d"]) == 0
        result = json.loads(capsys.readouterr().out)
        f = InstanceFile.load(out)
        inst = f.to_instance()
        radius, _ = cost_substring(
            inst, type(inst.strings[0]).from_text(inst.alphabet, result["center"])
        )
        assert radius == result["radius"]

    def test_exact_subcommand(self, tmp_path, capsys):
        path = tmp_path / "s.json"
        path.write_text('{"alphabet":"01","strings":["000","111"]}')
        assert main(["exact", str(path)]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result["center"] == "001" and result["radius"] == 2

    def test_bench_writes_csv(self, tmp_path, capsys):
        inst = tmp_path / "i.json"
        main(["gen", "--n", "3", "--m", "8", "--L", "5", "--d", "0",
              "--seed", "1", "--out", str(inst)])
        csv_out = tmp_path / "report.csv"
        code = main(["bench", str(inst), "--algos", "exact,small",
                     "--no-timing", "--out", str(csv_out)])
        assert code == 0
        lines = csv_out.read_text().splitlines()
        assert lines[0] == "instance,seed,algo,r,epsilon,radius,oracle,ratio,ms,status"
        assert len(lines) == 3

    def test_solve_string_rejects_substring_file_with_short_window(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text('{"alphabet":"01","strings":["0000","1111"],"L":2}')
        # the CLI treats the strings as a whole-string instance
        assert main(["solve-string", str(path)]) == 0

    def test_cli_error_exit_code(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"alphabet":"01","strings":["01","0"]}')
        assert main(["solve-string", str(path)]) == 2
