#![no_main]

use khxd_core::presimplicial::PartialPresimplicialSet;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = PartialPresimplicialSet::from_json(text) {
        let json = x.to_json();
        assert_eq!(PartialPresimplicialSet::from_json(&json).expect("canonical JSON reparses"), x);
        if x.validate().is_ok() && (0..=x.top_dim()).map(|k| x.cell_count(k)).sum::<usize>() <= 64 {
            let reduced = x.chain_complex(true).expect("validated sets give complexes");
            reduced.check_composition().expect("d^2 = 0");
            let _ = x.reduced_homology();
        }
    }
});
