"""A tiny chat-completion server running in a background thread."""

from __future__ import annotations

import json
import threading
import time
from contextlib import contextmanager
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer


class StubState:
    def __init__(self, script):
        # script: list of (status, body_text or None, delay); the last item repeats
        self.script = list(script)
        self.requests = []
        self.lock = threading.Lock()

    def next(self):
        with self.lock:
            i = min(len(self.requests) - 1, len(self.script) - 1)
            return self.script[i]


def _handler(state: StubState):
    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            length = int(self.headers.get("Content-Length", 0))
            body = json.loads(self.rfile.read(length))
            with state.lock:
                state.requests.append({"headers": dict(self.headers), "body": body})
            status, text, delay = state.next()
            if delay:
                time.sleep(delay)
            payload = b""
            if text is not None:
                payload = json.dumps({
                    "choices": [{"message": {"role": "assistant", "content": text}}],
                    "usage": {"prompt_tokens": 3, "completion_tokens": 2},
                }).encode()
            try:
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(payload)))
                self.end_headers()
                self.wfile.write(payload)
            except (BrokenPipeError, ConnectionResetError):
                pass

        def log_message(self, *args):
            pass

    return Handler


@contextmanager
def chat_server(script):
    state = StubState(script)
    server = ThreadingHTTPServer(("127.0.0.1", 0), _handler(state))
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield f"http://127.0.0.1:{server.server_address[1]}/v1/chat/completions", state
    finally:
        server.shutdown()
        server.server_close()


def unused_url():
    import socket

    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        port = s.getsockname()[1]
    return f"http://127.0.0.1:{port}/v1/chat/completions"
