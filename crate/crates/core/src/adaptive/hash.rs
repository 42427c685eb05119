/// Hash functions shared by every cuckoo table in the process.
///
/// Each function whitens the key fingerprint with a per-function offset and
/// runs the MurmurHash3 64-bit finalizer shape (three xorshifts, two
/// multiplications) with its own pair of odd multipliers.
#[derive(Debug)]
pub struct HashFamily {
    offsets: [u64; 3],
    seeds: [[u64; 2]; 3],
}

/// The process-wide family.
pub static FAMILY: HashFamily = HashFamily {
    offsets: [0x9e37_79b9_7f4a_7c15, 0xc2b2_ae3d_27d4_eb4f, 0x1656_67b1_9e37_79f9],
    seeds: [
        [0xff51_afd7_ed55_8ccd, 0xc4ce_b9fe_1a85_ec53],
        [0x9e37_79b9_7f4a_7c15 | 1, 0xbf58_476d_1ce4_e5b9],
        [0x94d0_49bb_1331_11eb, 0xd6e8_feb8_6659_fd93],
    ],
};

impl HashFamily {
    pub fn global() -> &'static HashFamily {
        &FAMILY
    }

    /// Maximum number of functions in the family.
    pub const MAX: usize = 3;

    pub fn seeds(&self) -> &[[u64; 2]; 3] {
        &self.seeds
    }

    #[inline]
    pub fn hash(&self, i: usize, fingerprint: u64) -> u64 {
        let [m1, m2] = self.seeds[i];
        let mut k = fingerprint ^ self.offsets[i];
        k ^= k >> 33;
        k = k.wrapping_mul(m1);
        k ^= k >> 33;
        k = k.wrapping_mul(m2);
        k ^= k >> 33;
        k
    }

    /// Slot of `fingerprint` under function `i` in a table of `2^lg_cap` slots.
    #[inline]
    pub fn slot(&self, i: usize, fingerprint: u64, lg_cap: u32) -> usize {
        (self.hash(i, fingerprint) >> (64 - lg_cap)) as usize
    }
}
