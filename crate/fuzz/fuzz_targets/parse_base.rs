#![no_main]

use clonepower::GateBase;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(base) = GateBase::parse(s, 6) {
        let again = GateBase::parse(&base.to_text(), 6).expect("serialized base parses");
        assert_eq!(again, base);
        let _ = clonepower::is_complete(&base);
    }
});
