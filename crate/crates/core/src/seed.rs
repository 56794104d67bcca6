//! Derivation of component seeds from a single master seed.

/// Labels for the independent random streams of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Ga,
    CrossValidation,
    Holdout,
}

impl Stream {
    fn label(self) -> u64 {
        match self {
            Stream::Ga => 0x6761_0000_0000_0001,
            Stream::CrossValidation => 0x6376_0000_0000_0002,
            Stream::Holdout => 0x686f_0000_0000_0003,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for one stream of a run.
pub fn derive(master: u64, stream: Stream) -> u64 {
    splitmix64(master ^ stream.label())
}
