//! Config hashing and version stamps shared by QMC runs and CSV output.

use sha2::{Digest, Sha256};

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Name of the pseudo-random generator used by every stochastic path.
pub const GENERATOR: &str = "ChaCha8 (rand_chacha), stream = walker index";

/// First 16 hex digits of the SHA-256 of `text`.
pub fn short_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_and_short() {
        // sha256("abc") = ba7816bf8f01cfea...
        assert_eq!(short_hash("abc"), "ba7816bf8f01cfea");
        assert_eq!(short_hash("x").len(), 16);
        assert_ne!(short_hash("a"), short_hash("b"));
    }
}
