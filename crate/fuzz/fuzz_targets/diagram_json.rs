#![no_main]

use khxd_core::diagram::Diagram;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(d) = Diagram::from_json(text) {
        let json = d.to_json();
        assert_eq!(Diagram::from_json(&json).expect("canonical JSON reparses").to_json(), json);
    }
});
