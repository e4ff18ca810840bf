use std::path::Path;
use std::process::Command;

#[test]
fn generated_header_compiles_as_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/census.h");
    let text = std::fs::read_to_string(&header).expect("build script writes the header");
    for name in [
        "census_word_parse",
        "census_dehn_reduce",
        "CENSUS_STATUS_OK",
        "typedef struct CensusWord CensusWord",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
    let src = Path::new(env!("CARGO_TARGET_TMPDIR")).join("use_header.c");
    std::fs::write(
        &src,
        "#include \"census.h\"\n\
         int main(void) {\n\
           CensusWord *w = 0;\n\
           CensusStatus s = census_word_parse(\"abAB\", false, &w);\n\
           census_word_free(w);\n\
           return s == CENSUS_STATUS_OK ? 0 : 1;\n\
         }\n",
    )
    .unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&src)
        .status()
        .expect("a C compiler is available");
    assert!(status.success());
}
