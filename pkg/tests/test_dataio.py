import http.server
import json
import threading
import warnings
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from rankzeta.dataio import (
    CURVE_HEADER,
    CacheConflictError,
    CurveDataset,
    DataFormatError,
    OfflineError,
    TraceCache,
    cache_get,
    cache_put,
    curve_csv_text,
    curves_from_api_json,
    fetch_curves,
    parse_curve_csv,
    parse_curve_spec,
    parse_curve_text,
)
from rankzeta.ec import CurveQ, discriminant_of

DATA = Path(__file__).parent / "data"
HEADER = ",".join(CURVE_HEADER)


def test_parse_row():
    ds = parse_curve_text(HEADER + "\n37a1,37a,37,1,0,0,1,-1,0,false\n")
    c = ds.curves[0]
    assert c.conductor == 37 and c.rank == 1 and c.coeffs == (0, 0, 1, -1, 0) and c.cm_flag is False


def test_cm_flag_optional():
    ds = parse_curve_text(",".join(CURVE_HEADER[:-1]) + "\n37a1,37a,37,1,0,0,1,-1,0\n")
    assert ds.curves[0].cm_flag is None


@pytest.mark.parametrize(
    "row, msg",
    [
        ("37a1,37a,0,1,0,0,1,-1,0,false", ":2"),
        ("37a1,37a,37,1,0,0,x,-1,0,false", "a3"),
        ("37a1,37a,37,1,0,0,0,0,0,false", "discriminant"),
        ("37a1,37a,37,1,0,0,1,-1,0,maybe", "cm_flag"),
    ],
)
def test_bad_rows(row, msg):
    with pytest.raises(DataFormatError, match=msg):
        parse_curve_text(HEADER + "\n" + row + "\n")


def test_duplicate_labels():
    with pytest.raises(DataFormatError, match="duplicate"):
        parse_curve_text(HEADER + "\n37a1,37a,37,1,0,0,1,-1,0,\n37a1,37a,37,1,0,0,1,-1,0,\n")


def test_missing_columns():
    with pytest.raises(DataFormatError, match="missing"):
        parse_curve_text("label,conductor\nx,1\n")


def test_unreadable_file(tmp_path):
    with pytest.raises(OSError):
        parse_curve_csv(tmp_path / "nope.csv")


def test_fixture_parses():
    ds = parse_curve_csv(DATA / "family_7500_10000.csv")
    assert len(ds) > 3000
    assert all(7500 <= c.conductor <= 10000 for c in ds)


coeffs = st.tuples(*[st.integers(-10**6, 10**6)] * 5).filter(lambda c: discriminant_of(c) != 0)
curves = st.builds(
    CurveQ,
    label=st.from_regex(r"[0-9]{1,5}\.[a-z]{1,2}[0-9]", fullmatch=True),
    coeffs=coeffs,
    isogeny_class=st.from_regex(r"[0-9]{1,5}\.[a-z]{1,2}", fullmatch=True),
    conductor=st.integers(1, 10**6),
    rank=st.integers(0, 5),
    cm_flag=st.sampled_from([None, True, False]),
)


@given(st.lists(curves, max_size=8, unique_by=lambda c: c.label))
def test_csv_roundtrip(cs):
    ds = parse_curve_text(curve_csv_text(cs))
    assert ds.curves == cs
    assert [c.cm_flag for c in ds.curves] == [c.cm_flag for c in cs]


def test_curve_spec():
    assert parse_curve_spec("[1,0,0,87,442]").coeffs == (1, 0, 0, 87, 442)
    c = parse_curve_spec("37a1,37a,37,1,0,0,1,-1,0,false")
    assert c.label == "37a1" and c.rank == 1
    with pytest.raises(DataFormatError):
        parse_curve_spec("[1,2,3]")


def test_cache_basics(tmp_path):
    cache = TraceCache(tmp_path / "c.csv")
    cache_put(cache, "X", 5, 2)
    assert cache_get(cache, "X", 5) == 2
    assert cache_get(cache, "X", 7) is None
    cache_put(cache, "X", 5, 2)  # idempotent
    with pytest.raises(CacheConflictError):
        cache_put(cache, "X", 5, 3)
    with pytest.raises(DataFormatError):
        cache_put(cache, "X", 7, 6)  # 36 > 28


def test_cache_restart_and_torn_line(tmp_path):
    path = tmp_path / "c.csv"
    cache = TraceCache(path)
    cache.put_many("E", [(5, 2), (7, -1), (11, 0)])
    with open(path, "a") as fh:
        fh.write("E,13,")  # interrupted append
    again = TraceCache(path)
    assert len(again) == 3 and again.get("E", 7) == -1
    assert ("E", 13) not in again


def test_cache_conflict_on_load(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text("label,q,a\nE,5,2\nE,5,1\n")
    with pytest.raises(CacheConflictError):
        TraceCache(path)


def test_cache_compact(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text("label,q,a\nE,7,1\nE,5,2\nE,7,1\n")
    cache = TraceCache(path)
    cache.compact()
    assert path.read_text() == "label,q,a\nE,5,2\nE,7,1\n"


def test_cache_concurrent_writers(tmp_path):
    cache = TraceCache(tmp_path / "c.csv")

    def work(k):
        cache.put_many(f"E{k}", [(p, 0) for p in (5, 7, 11, 13, 17, 19)])

    threads = [threading.Thread(target=work, args=(k,)) for k in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(TraceCache(tmp_path / "c.csv")) == 48


def test_fetch_offline():
    with pytest.raises(OfflineError, match="--input"):
        fetch_curves(0, 11, 50)


def test_api_json_fixture():
    curves = curves_from_api_json((DATA / "api_rank0_11_50.json").read_text())
    assert curves and min(c.conductor for c in curves) == 11
    assert all(c.rank == 0 for c in curves)


def test_api_json_malformed():
    with pytest.raises(DataFormatError, match="JSON"):
        curves_from_api_json("{not json")
    with pytest.raises(DataFormatError, match="data"):
        curves_from_api_json({"rows": []})
    with pytest.raises(DataFormatError, match="record 0"):
        curves_from_api_json({"data": [{"lmfdb_label": "x"}]})


@pytest.fixture
def api_server():
    body = (DATA / "api_rank0_11_50.json").read_bytes()

    class Handler(http.server.BaseHTTPRequestHandler):
        def do_GET(self):
            payload = body if "rank=0" in self.path else b'{"data": []}'
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.end_headers()
            self.wfile.write(payload)

        def log_message(self, *args):
            pass

    srv = http.server.HTTPServer(("127.0.0.1", 0), Handler)
    th = threading.Thread(target=srv.serve_forever, daemon=True)
    th.start()
    yield f"http://127.0.0.1:{srv.server_port}/api?rank={{rank}}&conductor={{conductor_lo}}-{{conductor_hi}}"
    srv.shutdown()


def test_fetch_from_local_server(api_server, tmp_path):
    snap = tmp_path / "snap.csv"
    ds = fetch_curves(0, 11, 50, online=True, url_template=api_server, snapshot=snap)
    assert any(c.conductor == 11 for c in ds)
    assert "GET" in ds.provenance
    assert parse_curve_csv(snap).curves == ds.curves


def test_fetch_empty_warns(api_server):
    with pytest.warns(RuntimeWarning):
        ds = fetch_curves(3, 11, 50, online=True, url_template=api_server)
    assert len(ds) == 0


def test_fetch_network_failure():
    with pytest.raises(OSError):
        fetch_curves(0, 11, 50, online=True, url_template="http://127.0.0.1:9/{rank}{conductor_lo}{conductor_hi}", timeout=2)
