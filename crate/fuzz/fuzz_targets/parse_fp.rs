#![no_main]

use libfuzzer_sys::fuzz_target;
use skewpencil::field::{Field, PrimeField};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for p in [2, 7, 1_000_003, 18_446_744_073_709_551_557] {
        let k = PrimeField::new(p).unwrap();
        if let Ok(a) = k.parse(s) {
            assert!(a.value() < p);
            assert_eq!(k.parse(&k.format(&a)).unwrap(), a);
        }
    }
});
