"""
Shared fixtures for the chartsem test suite.
"""

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from chartsem.insights.insight_manager import InsightManager
from chartsem.synth.recommend import recommend_charts
from chartsem.synth.tables import gen_corpus_tables

SMALL_SEED = 11
SMALL_TABLES = 12


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run the full-scale directional checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def small_tables():
    return gen_corpus_tables(SMALL_SEED, SMALL_TABLES)


@pytest.fixture(scope="session")
def small_charts(small_tables):
    charts = []
    for table in small_tables:
        charts.extend(recommend_charts(table, 3, style_seed=SMALL_SEED))
    return sorted(charts, key=lambda c: c.id)


@pytest.fixture(scope="session")
def small_corpus(small_charts):
    """(charts, insights) of a small seeded corpus with every chart kept."""
    insights, report = InsightManager().synthesize_all(small_charts)
    skipped = {chart_id for chart_id, _ in report.skipped}
    return [c for c in small_charts if c.id not in skipped], insights


class _StubHandler(BaseHTTPRequestHandler):
    def do_POST(self):
        length = int(self.headers.get('Content-Length', 0))
        body = json.loads(self.rfile.read(length) or b'{}')
        self.server.requests.append(body)
        status, payload, *declared = self.server.respond(body)
        data = payload if isinstance(payload, bytes) else json.dumps(payload).encode('utf-8')
        self.send_response(status)
        self.send_header('Content-Type', 'application/json')
        self.send_header('Content-Length', str(declared[0] if declared else len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, format, *args):
        pass


@pytest.fixture
def stub_server():
    """
    Start a local JSON endpoint.

    Call the fixture value with respond(body) -> (status, payload) and get
    back (url, server); server.requests lists the decoded request bodies.
    A third item in the response overrides the Content-Length header, so a
    larger value sends a truncated body.
    """
    servers = []

    def start(respond):
        server = ThreadingHTTPServer(('127.0.0.1', 0), _StubHandler)
        server.daemon_threads = True
        server.respond = respond
        server.requests = []
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        servers.append(server)
        return f"http://127.0.0.1:{server.server_address[1]}/v1", server

    yield start
    for server in servers:
        server.shutdown()
        server.server_close()
