#![no_main]

use libfuzzer_sys::fuzz_target;
use skewpencil::field::{PrimeField, RationalField};
use skewpencil::json::{forms_from_json, forms_to_json, parse_value};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(v) = parse_value(s) else { return };
    if let Ok(forms) = forms_from_json(&RationalField, &v) {
        assert_eq!(forms_from_json(&RationalField, &forms_to_json(&RationalField, &forms)).unwrap(), forms);
    }
    let k = PrimeField::new(7).unwrap();
    if let Ok(forms) = forms_from_json(&k, &v) {
        assert_eq!(forms_from_json(&k, &forms_to_json(&k, &forms)).unwrap(), forms);
    }
});
