#![no_main]

use libfuzzer_sys::fuzz_target;
use skewpencil::field::Rational;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(q) = s.parse::<Rational>() {
        let again: Rational = q.to_string().parse().expect("display output parses");
        assert_eq!(q, again);
    }
});
