#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(v) = casorati::cli::parse::parse_form(s) {
        let printed = casorati::cli::print::form_to_string(&v);
        match casorati::cli::parse::parse_form(&printed) {
            Ok(again) => assert_eq!(again, v, "round trip of {printed:?}"),
            Err(casorati::Error::TooLarge(_)) => {}
            Err(e) => panic!("printed output {printed:?} does not parse: {e}"),
        }
    }
});
