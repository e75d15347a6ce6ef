#![no_main]

use khxd_core::diagram::parse_pd;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(d) = parse_pd(text) {
        // accepted codes serialize canonically and reparse to the same diagram
        let again = parse_pd(&d.to_pd_string()).expect("canonical PD reparses");
        assert_eq!(again, d);
        if d.crossing_count() <= 8 {
            let _ = khxd_core::khovanov::j_extremes(&d);
            let _ = khxd_core::analysis::analyze(&d, true);
        }
    }
});
