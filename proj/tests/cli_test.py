"""Exit codes and output of the otmlab command-line tool."""
import json
import os
import subprocess
import sys
import tempfile
import unittest

EXE = sys.argv[1] if len(sys.argv) > 1 else "otmlab"
FIX = sys.argv[2] if len(sys.argv) > 2 else "fixtures"


def otmlab(*args):
    p = subprocess.run([EXE, *args], capture_output=True, text=True, timeout=300)
    return p.returncode, p.stdout, p.stderr


def prog(name):
    return os.path.join(FIX, "programs", name + ".otm")


def manifest(name):
    return os.path.join(FIX, "witnesses", name + ".json")


class Run(unittest.TestCase):
    def test_halt_immediately(self):
        rc, out, _ = otmlab("run", prog("halt_immediately"))
        self.assertEqual(rc, 0)
        self.assertTrue(out.startswith("HALTED time=0"))

    def test_right_sweep(self):
        rc, out, _ = otmlab("run", prog("right_sweep"), "--budget", "2000,2")
        self.assertEqual(rc, 0)
        self.assertTrue(out.startswith("HALTED time=w+2"))
        self.assertIn("work head=w {[0,w)}", out)

    def test_unresolved(self):
        rc, out, _ = otmlab("run", prog("right_sweep"), "--budget", "10,0")
        self.assertEqual(rc, 3)
        self.assertTrue(out.startswith("UNRESOLVED"))

    def test_json_and_trace(self):
        with tempfile.TemporaryDirectory() as d:
            trace = os.path.join(d, "t.jsonl")
            rc, out, _ = otmlab("run", prog("right_sweep"), "--json", "--trace", trace)
            self.assertEqual(rc, 0)
            doc = json.loads(out)
            self.assertEqual(json.loads(json.dumps(doc)), doc)
            with open(trace) as f:
                events = [json.loads(line) for line in f]
            self.assertEqual(events[0]["event"], "start")
            limits = [e for e in events if e["event"] == "limit"]
            self.assertEqual(len(limits), 1)
            self.assertEqual(limits[0]["time"], "w")

    def test_input_literal(self):
        rc, out, _ = otmlab("run", prog("copy_identity"), "--input", "{{}}")
        self.assertEqual(rc, 0)
        self.assertTrue(out.startswith("HALTED"))

    def test_parse_error(self):
        with tempfile.NamedTemporaryFile("w", suffix=".otm", delete=False) as f:
            f.write("tapes in work out;\nstate a;\non a -> wrte out=1;\n")
        try:
            rc, _, err = otmlab("run", f.name)
        finally:
            os.unlink(f.name)
        self.assertEqual(rc, 2)
        self.assertIn("3:", err)


class Check(unittest.TestCase):
    def test_ok(self):
        rc, out, _ = otmlab("check", manifest("pp_le_zl"), "--universe", "rank:3")
        self.assertEqual(rc, 0)
        self.assertTrue(out.startswith("OK exhaustive (16 instances"))

    def test_counterexample(self):
        rc, out, _ = otmlab("check", manifest("broken/pp_le_zl_const_empty"))
        self.assertEqual(rc, 1)
        self.assertTrue(out.startswith("FAIL"))
        self.assertIn("x={{{}}}", out)

    def test_empty_universe(self):
        rc, out, _ = otmlab("check", manifest("pp_le_zl"), "--universe", "rank:0")
        self.assertEqual(rc, 0)
        self.assertTrue(out.startswith("OK"))

    def test_sampling_needs_seed(self):
        rc, _, err = otmlab("check", manifest("acprime_le_wo"), "--cap", "10")
        self.assertEqual(rc, 2)
        self.assertIn("seed", err)

    def test_report_is_deterministic(self):
        with tempfile.TemporaryDirectory() as d:
            a, b = os.path.join(d, "a.json"), os.path.join(d, "b.json")
            for path in (a, b):
                rc, _, _ = otmlab("check", manifest("broken/pp_le_ac_identity"), "--cap", "50", "--seed", "4",
                                  "--report", path)
                self.assertEqual(rc, 1)
            with open(a) as fa, open(b) as fb:
                self.assertEqual(json.load(fa), json.load(fb))


class Sets(unittest.TestCase):
    def test_encode_decode(self):
        rc, out, _ = otmlab("encode", "{}")
        self.assertEqual(rc, 0)
        self.assertEqual(json.loads(out), {"bound": "1", "pairs": []})
        rc, out, _ = otmlab("decode", out.strip())
        self.assertEqual(rc, 0)
        self.assertEqual(out.strip(), "{}")

    def test_invalid_code(self):
        rc, _, err = otmlab("decode", '{"bound":"1","pairs":["0"]}')
        self.assertEqual(rc, 2)
        self.assertIn("ill-founded", err)

    def test_eval(self):
        rc, out, _ = otmlab("eval", "all z in x (z in y)", "--env", "x={{}}", "--env", "y={{},{{}}}")
        self.assertEqual(rc, 0)
        self.assertEqual(out.strip(), "true")

    def test_eval_statement(self):
        rc, out, _ = otmlab("eval", "ALL x EX y (x in y)", "--carrier", "rank:2")
        self.assertEqual(rc, 0)
        self.assertEqual(out.strip(), "false")


class Canon(unittest.TestCase):
    def test_valid_and_invalid(self):
        rc, _, _ = otmlab("canon", "PP")
        self.assertEqual(rc, 0)
        rc, out, _ = otmlab("canon", "PP", "--invalid", "0")
        self.assertEqual(rc, 1)
        self.assertIn("FAIL", out)

    def test_list_universe(self):
        rc, out, _ = otmlab("list-universe", "PP", "--universe", "rank:3")
        self.assertEqual(rc, 0)
        self.assertEqual(len(out.split()), 16)


class Usage(unittest.TestCase):
    def test_unknown_flag(self):
        rc, out, err = otmlab("run", prog("halt_immediately"), "--bogus")
        self.assertEqual(rc, 2)
        self.assertIn("Usage", out + err)

    def test_no_subcommand(self):
        rc, _, _ = otmlab()
        self.assertEqual(rc, 2)

    def test_unknown_relation(self):
        rc, _, _ = otmlab("canon", "NOPE")
        self.assertEqual(rc, 2)


if __name__ == "__main__":
    unittest.main(argv=[sys.argv[0]], verbosity=2)
