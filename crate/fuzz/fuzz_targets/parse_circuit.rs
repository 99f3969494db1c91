#![no_main]

use std::sync::Arc;

use clonepower::clone::standard;
use clonepower::{Circuit, Semantics};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let base = standard::and_or_not();
    let Ok(c) = Circuit::parse(s, Arc::clone(&base)) else {
        return;
    };
    let text = c.to_text();
    let again = Circuit::parse(&text, base).expect("serialized circuit parses");
    assert_eq!(again.to_text(), text);
    // Small enough to enumerate: both semantics must agree with the reparse.
    if c.n() + c.m() <= 12 {
        for sem in [Semantics::Det, Semantics::Nondet] {
            assert_eq!(c.truth_table(sem).unwrap(), again.truth_table(sem).unwrap());
        }
    }
});
