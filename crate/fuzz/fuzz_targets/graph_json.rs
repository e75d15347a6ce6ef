#![no_main]

use khxd_core::state_graph::StateGraph;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = StateGraph::from_json(text) {
        assert_eq!(StateGraph::from_json(&g.to_json()).expect("canonical JSON reparses").to_json(), g.to_json());
        if g.check_admissible().is_ok() && g.edge_count() <= 8 {
            let x = khxd_core::xd::build_xd(&g).expect("admissible graphs build");
            assert!(x.validate().is_ok());
            let _ = khxd_core::homotopy::homotopy_type(&g);
        }
    }
});
