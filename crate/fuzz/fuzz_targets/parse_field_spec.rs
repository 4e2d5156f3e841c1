#![no_main]

use libfuzzer_sys::fuzz_target;
use skewpencil::field::FieldSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = s.parse::<FieldSpec>() {
        assert_eq!(spec.to_string().parse::<FieldSpec>().unwrap(), spec);
    }
});
