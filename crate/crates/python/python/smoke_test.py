"""Smoke test for the pyeon extension module.

Build and run from the repository root:

    cargo build -p eon-itinerant-py --release --features extension-module
    cp target/release/libpyeon.so crates/python/python/pyeon.so
    python3 crates/python/python/smoke_test.py
"""

import pyeon


def main():
    g = pyeon.Graph.generate(30, 500.0, 500.0, slices=64, seed=7)
    stats = g.stats()
    print(g, "alpha=%.3f diameter=%d km" % (stats["alpha"], stats["diameter_km"]))
    assert g.link_count == stats["link_count"]

    again = pyeon.Graph.from_text(g.to_text())
    assert again.links() == g.links()

    found = pyeon.route(g, 0, 29, 4, routing="optimal", policy="fittest")
    assert found is not None
    nodes, length, (lo, hi) = found
    assert nodes[0] == 0 and nodes[-1] == 29 and hi - lo == 4
    for router in ("yen", "ldasp"):
        other = pyeon.route(g, 0, 29, 4, routing=router)
        assert other is None or other[1] >= length
    g.allocate(nodes, lo, hi)

    moved = pyeon.reconfigure(g, nodes, lo, hi, nodes[-2])
    assert moved["outcome"] == "bridged" and moved["new_links"] == 0

    assert pyeon.select_slot([0, 1, 2, 4, 5], 8, 2, policy="fittest") == (4, 6)
    assert abs(pyeon.lambda_for_load(1.0, 1.0, 1.0, 1.0, 1, 1) - 1.0) < 1e-12

    proposed = pyeon.run_simulation(load=1.0, nodes=30, slices=64, horizon=30.0, seed=5)
    complete = pyeon.run_simulation(load=1.0, nodes=30, slices=64, horizon=30.0, seed=5, reconfig="complete")
    print("new links: proposed %.3f, complete %.3f" % (
        proposed["metrics"]["new_links"], complete["metrics"]["new_links"]))
    assert proposed["links"] == complete["links"]
    print("ok")


if __name__ == "__main__":
    main()
