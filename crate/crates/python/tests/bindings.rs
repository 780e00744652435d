use std::ffi::CString;

use pyo3::prelude::*;
use pyo3::types::PyDict;

/// Runs `code` with the module bound to `sg`; assertion failures surface
/// as Python exceptions.
fn run(code: &str) {
    Python::initialize();
    Python::attach(|py| {
        let module = pyo3::wrap_pymodule!(sharegame_py::sharegame_py)(py);
        let globals = PyDict::new(py);
        globals.set_item("sg", module).unwrap();
        let src = CString::new(code).unwrap();
        if let Err(e) = py.run(&src, Some(&globals), None) {
            panic!("python error: {e}");
        }
    });
}

#[test]
fn graphs_and_families() {
    run(r##"
g = sg.Graph.family("karate")
assert (g.node_count, g.edge_count, len(g)) == (34, 78, 34)
assert g.k_hop(0, 1)[0] == 0
chain = sg.Graph(4, [(0, 1), (1, 2), (2, 3)])
assert chain.neighbors(1) == [0, 2]
assert chain.edges() == [(0, 1), (1, 2), (2, 3)]
g2, ids = sg.Graph.parse_edge_list("# c\n10 30\n30 20\n")
assert ids == [10, 20, 30] and g2.edges() == [(0, 2), (1, 2)]
er1 = sg.Graph.family("er:30:0.2", seed=5)
er2 = sg.Graph.family("er:30:0.2", seed=5)
assert er1.edges() == er2.edges()
for bad in (lambda: sg.Graph(2, [(0, 0)]), lambda: sg.Graph.family("cube:3"),
            lambda: sg.Graph.parse_edge_list("1 2 3\n")):
    try:
        bad()
        raise AssertionError("expected ValueError")
    except ValueError:
        pass
"##);
}

#[test]
fn utilities_and_equilibria() {
    run(r##"
g = sg.Graph.family("star:5")
cfg = sg.GameConfig.sgg(1)
assert cfg.variant == "SGG" and cfg.a is None
game = sg.Game(g, cfg)
center = [1, 0, 0, 0, 0]
assert game.is_nash(center) and game.social_cost(center) == 1.0
assert game.utility(center, 0) == 1.0 and game.utility(center, 3) == 2.0
leaves = [0, 1, 1, 1, 1]
assert game.is_nash(leaves) and game.owners(leaves) == [1, 2, 3, 4]
assert not game.is_nash([0] * 5)

ac = sg.Game(g, sg.GameConfig.sgg_ac(1, xi=2))
assert ac.config.xi == 2 and abs(ac.config.a - 0.4) < 1e-12
s = [0, 0, 0, 0, 0]
assert ac.followers(s, 0) == [1, 2, 3, 4]
assert ac.is_in_t(s) and ac.is_nash(s)
assert ac.deviation_utility(s, 1, 1) < ac.utility(s, 1)
try:
    sg.GameConfig.sgg_ac(1, a=0.5)
    raise AssertionError("integral p/a accepted")
except ValueError:
    pass
try:
    game.is_nash([2, 0, 0, 0, 0])
    raise AssertionError("bad profile accepted")
except ValueError:
    pass
"##);
}

#[test]
fn dynamics_optimum_and_efficiency() {
    run(r##"
karate = sg.Graph.family("karate")
game = sg.Game(karate, sg.GameConfig.sgg_ac(1, xi=2))
out = game.dynamics(7)
assert out == game.dynamics(7)
assert game.is_nash(out["profile"]) and out["passes"] <= 3
assert len(out["case_counts"]) == out["passes"]
stats = game.cost_stats(runs=200, seed=1)
assert stats["runs"] == 200 and 7.0 < stats["mean"] < 10.5
owners, proven = sg.min_dominating_set(karate, 1)
assert proven and len(owners) == 4
assert len(sg.greedy_dominating_set(karate, 1)) >= 4
assert game.is_nash(game.stabilize(owners))
assert game.is_nash(game.greedy_ne()) and game.is_nash(game.greedy_ne(seed=3))

star = sg.Graph.family("star:10")
report = sg.Game(star, sg.GameConfig.sgg(1)).exact_efficiency()
assert report["poa"] == 9.0 and report["pos"] == 1.0 and report["exact"]
assert sg.sgg_equilibrium_owner_sets(star, 1) == [[0], list(range(1, 10))]
assert sg.sggac_witness(star, 1, 2, [0]) == [0] * 10
assert sg.sggac_witness(star, 1, 2, [1]) is None
lp = sg.export_lp(sg.Graph(2, [(0, 1)]), 1)
assert lp.startswith("\\ minimum distance-1") and lp.endswith("End\n")
assert sg.derive_seed(1, 0) != sg.derive_seed(1, 1)
"##);
}
