"""
The HTTP JSON API
=================

The same pipeline over HTTP: upload a CSV to open a session, post utterances,
inspect the interpretation plan, and re-emit charts after choosing an
alternate interpretation. This demo drives the ASGI app in-process; `python3
-m compareviz.cli serve` runs the same app on a real port.
"""

from pathlib import Path

from fastapi.testclient import TestClient

from compareviz.service import create_app

SAMPLES = Path(__file__).parent.parent / "sample_data"

client = TestClient(create_app())

upload = client.post("/datasets", files={
    "file": ("books.csv", (SAMPLES / "books.csv").read_text(), "text/csv")})
session = upload.json()
print("session:", session["session_id"], "rows:", session["row_count"])

response = client.post(f"/sessions/{session['session_id']}/query",
                       json={"utterance": "compare the popularity of all fiction books"})
document = response.json()
print("\nquery:", document["utterance"])
print("designs:", [r["design"]["id"] for r in document["recommendations"]])
entry = document["plan"]["entries"][0]
for i, interp in enumerate(entry["interpretations"]):
    marker = "*" if i == entry["chosen"] else " "
    print(f" {marker} {i}: {interp['provenance']}")

choose = client.post(
    f"/sessions/{session['session_id']}/query/{document['query_id']}/choose",
    json={"reference": "popularity", "index": 1})
switched = choose.json()
print("\nafter choosing interpretation 1:")
print("measure field:",
      switched["recommendations"][0]["spec"]["usermeta"]["encodings"]["x"]["field"])
print("ranks unchanged:",
      [r["design"]["id"] for r in switched["recommendations"]])
