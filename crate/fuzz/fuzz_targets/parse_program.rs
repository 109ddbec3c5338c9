#![no_main]

use absinv::program_model::parse_program;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(src) = std::str::from_utf8(data) {
        if let Ok(program) = parse_program(src) {
            let text = program.to_text();
            let again = parse_program(&text).expect("printed program parses");
            assert_eq!(again.to_text(), text);
        }
    }
});
