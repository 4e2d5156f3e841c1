#![no_main]

use libfuzzer_sys::fuzz_target;
use skewpencil::field::{PrimeField, RationalField};
use skewpencil::json::{declared_field, parse_value, pfaffian_input_from_json};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(v) = parse_value(s) else { return };
    let _ = declared_field(&v);
    let _ = pfaffian_input_from_json(&RationalField, &v);
    let _ = pfaffian_input_from_json(&PrimeField::new(7).unwrap(), &v);
});
