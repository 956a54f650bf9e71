/// Arithmetic-operation sink threaded through the fast executors. The
/// uninstrumented path uses [`NoCount`], which compiles to nothing.
pub trait OpCounter {
    fn adds(&mut self, k: u64);
    fn mults(&mut self, k: u64);
}

/// Zero-sized counter that discards everything.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoCount;

impl OpCounter for NoCount {
    #[inline(always)]
    fn adds(&mut self, _k: u64) {}

    #[inline(always)]
    fn mults(&mut self, _k: u64) {}
}

/// Tally of additions and multiplications.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCount {
    pub adds: u64,
    pub mults: u64,
}

impl OpCounter for OpCount {
    fn adds(&mut self, k: u64) {
        self.adds += k;
    }

    fn mults(&mut self, k: u64) {
        self.mults += k;
    }
}
