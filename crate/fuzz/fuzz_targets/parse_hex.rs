#![no_main]

use clonepower::BoolFun;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&arity, rest)) = data.split_first() else {
        return;
    };
    let Ok(s) = std::str::from_utf8(rest) else {
        return;
    };
    if let Ok(f) = BoolFun::from_hex(usize::from(arity % 12), s) {
        assert_eq!(BoolFun::from_hex(f.arity(), &f.to_hex()).unwrap(), f);
    }
});
