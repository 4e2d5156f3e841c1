#![no_main]

use libfuzzer_sys::fuzz_target;
use skewpencil::field::{PrimeField, RationalField};
use skewpencil::json::{lines_from_json, lines_to_json, parse_value};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(v) = parse_value(s) else { return };
    if let Ok(lines) = lines_from_json(&RationalField, &v) {
        assert_eq!(lines_from_json(&RationalField, &lines_to_json(&RationalField, &lines)).unwrap(), lines);
    }
    let k = PrimeField::new(7).unwrap();
    if let Ok(lines) = lines_from_json(&k, &v) {
        assert_eq!(lines_from_json(&k, &lines_to_json(&k, &lines)).unwrap(), lines);
    }
});
