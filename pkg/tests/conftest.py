import json

import pytest

from nedstream import _kernels
from nedstream.synthetic import make_corpus, write_gazetteer, write_jsonl

BACKENDS = [_kernels.python] + ([_kernels.compiled] if _kernels.compiled is not None else [])


@pytest.fixture(params=BACKENDS, ids=lambda m: m.BACKEND)
def kernels(request):
    return request.param


@pytest.fixture(scope="session")
def synth():
    return make_corpus()


@pytest.fixture
def synth_files(tmp_path, synth):
    corpus, gaz = tmp_path / "corpus.jsonl", tmp_path / "gazetteer.json"
    write_jsonl(synth, corpus)
    write_gazetteer(synth, gaz)
    return corpus, gaz


@pytest.fixture
def write_jsonl_records(tmp_path):
    def _write(records, name="corpus.jsonl"):
        path = tmp_path / name
        path.write_text("".join(json.dumps(r) + "\n" if not isinstance(r, str) else r + "\n"
                                for r in records), encoding="utf-8")
        return path
    return _write


def pytest_terminal_summary(terminalreporter):
    lines = []
    for reports in terminalreporter.stats.values():
        for rep in reports:
            if getattr(rep, "when", None) != "call" and not (getattr(rep, "when", None) == "setup" and rep.skipped):
                continue
            lines += [v for k, v in getattr(rep, "user_properties", ()) if k == "acceptance"]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
