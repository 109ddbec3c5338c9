#![no_main]

use absinv::program_model::{parse_literal, print_literal, Sort};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&head, rest)) = data.split_first() else {
        return;
    };
    let Ok(src) = std::str::from_utf8(rest) else {
        return;
    };
    let vars = usize::from(head & 0x07);
    let sort = if head & 0x08 == 0 { Sort::Int } else { Sort::Rat };
    if let Ok(lit) = parse_literal(src, vars, sort) {
        let text = print_literal(&lit);
        assert_eq!(parse_literal(&text, vars, sort).as_ref(), Ok(&lit), "{text}");
    }
});
