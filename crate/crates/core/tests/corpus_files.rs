//! The checked-in proof files stay in sync with the sample builders.
//! Regenerate with `REGEN_CORPUS=1 cargo test -p goodman-core --test
//! corpus_files`.

use std::path::PathBuf;

use goodman_core::corpus;
use goodman_core::syntax::{parse_proof, Signature};

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus/proofs")
}

#[test]
fn proof_files_match_the_builders() {
    let sig = Signature::standard();
    let dir = corpus_dir();
    let regen = std::env::var("REGEN_CORPUS").is_ok();
    for s in corpus::samples(&sig) {
        let path = dir.join(format!("{}.proof", s.name));
        let rendered = s.derivation.to_string();
        if regen {
            std::fs::write(&path, &rendered).unwrap();
            continue;
        }
        let on_disk = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}; regenerate with REGEN_CORPUS=1", path.display()));
        assert_eq!(on_disk, rendered, "{} is out of date", path.display());
        let parsed = parse_proof(&on_disk, &sig).unwrap();
        assert_eq!(parsed, s.derivation);
    }
}
