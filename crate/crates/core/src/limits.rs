/// Size guards for the exponential searches. Exceeding one is a hard
/// [`Error::ResourceLimit`](crate::Error::ResourceLimit), never a silent cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum entries in one Δ-type table, `|D|^n · 2^(n+1)`.
    pub delta_entries: usize,
    /// Maximum configuration size `K` accepted by the checker (it performs
    /// `2^K · K` Δ comparisons).
    pub config_size: usize,
    /// Maximum `|theta_set|` for exhaustive good-configuration search.
    pub exhaustive_theta: usize,
    /// Maximum tuple length `2K` enumerated by the q-type harness.
    pub q_tuple_len: usize,
    /// Maximum `|theta_set|` for the q-type harness enumeration.
    pub q_theta: usize,
    /// Maximum `|dom(p)|` whose subsets are materialized as q'' conjunctions.
    pub q_conjunction_dom: usize,
    /// Maximum number of columns in a generated structure.
    pub generated_params: usize,
    /// Maximum `k` for [`gen_shattered`](crate::generators::gen_shattered).
    pub shattered_k: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            delta_entries: 1 << 22,
            config_size: 16,
            exhaustive_theta: 16,
            q_tuple_len: 4,
            q_theta: 12,
            q_conjunction_dom: 16,
            generated_params: 1 << 15,
            shattered_k: 5,
        }
    }
}
