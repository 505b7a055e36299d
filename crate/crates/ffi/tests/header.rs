use std::path::{Path, PathBuf};
use std::process::Command;

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include").join("quartetnet.h")
}

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "QN_STATUS_OK",
        "QN_STATUS_WITNESS",
        "QN_MODE_FAST",
        "typedef struct QnNetwork QnNetwork",
        "typedef struct QnQuartetSet QnQuartetSet",
        "typedef struct QnResult QnResult",
        "qn_reconstruct(",
        "qn_last_error_message(",
        "qn_string_free(",
        "qn_result_network(",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
}

// Compiles a small C program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libquartetnet_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let dir = tempfile::TempDir::new().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "quartetnet.h"

int main(void) {
    QnQuartetSet *qs = NULL;
    const char *text = "a b | c d\na b | c e\na b | d e\na c | d e\nb c | d e\n";
    if (qn_quartets_parse(text, &qs) != QN_STATUS_OK) return 10;
    QnResult *res = NULL;
    if (qn_reconstruct(qs, "a", QN_MODE_AUTO, true, &res) != QN_STATUS_OK) return 11;
    char *out = NULL;
    if (qn_network_write(qn_result_network(res), &out) != QN_STATUS_OK) return 12;
    int ok = strstr(out, "taxa a b c d e") != NULL;
    qn_string_free(out);
    if (qn_result_dimension(res) != 3) return 13;
    qn_result_free(res);
    qn_quartets_free(qs);
    if (qn_quartets_parse("a b | c\n", &qs) != QN_STATUS_ERR_PARSE) return 14;
    if (strlen(qn_last_error_message()) == 0) return 15;
    return ok ? 0 : 16;
}
"#,
    )
    .unwrap();
    let bin = dir.path().join("main");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&bin).status().unwrap();
    assert_eq!(run.code(), Some(0));
}
