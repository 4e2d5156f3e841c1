#![no_main]

use libfuzzer_sys::fuzz_target;
use skewpencil::field::{PrimeField, RationalField};
use skewpencil::json::{parse_value, pencil_from_json, pencil_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(v) = parse_value(s) else { return };
    if let Ok(p) = pencil_from_json(&RationalField, &v) {
        assert_eq!(pencil_from_json(&RationalField, &pencil_to_json(&RationalField, &p)).unwrap(), p);
    }
    let k = PrimeField::new(7).unwrap();
    if let Ok(p) = pencil_from_json(&k, &v) {
        assert_eq!(pencil_from_json(&k, &pencil_to_json(&k, &p)).unwrap(), p);
    }
});
