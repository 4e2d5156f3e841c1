#![no_main]

use libfuzzer_sys::fuzz_target;
use skewpencil::field::{PrimeField, RationalField};
use skewpencil::json::{form_from_json, form_to_json, parse_value};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(v) = parse_value(s) else { return };
    if let Ok(f) = form_from_json(&RationalField, &v, "$") {
        assert_eq!(form_from_json(&RationalField, &form_to_json(&RationalField, &f), "$").unwrap(), f);
    }
    let k = PrimeField::new(7).unwrap();
    if let Ok(f) = form_from_json(&k, &v, "$") {
        assert_eq!(form_from_json(&k, &form_to_json(&k, &f), "$").unwrap(), f);
    }
});
