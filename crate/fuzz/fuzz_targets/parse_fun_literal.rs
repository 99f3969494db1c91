#![no_main]

use clonepower::boolfun::parse_fun_literal;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((name, f)) = parse_fun_literal(s, 6) {
        // Printing and re-reading a parsed literal is the identity.
        let again = format!("{name} {} {}", f.arity(), f.to_bit_string());
        assert_eq!(parse_fun_literal(&again, 6).unwrap(), (name, f));
    }
});
