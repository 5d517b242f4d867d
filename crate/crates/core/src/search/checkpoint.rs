//! Binary checkpoint files.
//!
//! Layout (little endian): magic `SFCK`, `u16` version, `u8` n, `u64` task
//! hash, `u8` complete flag, `u32` segment index, the resume path, then the
//! merged tally and the tally of the partially scanned segment.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::Tally;

const MAGIC: &[u8; 4] = b"SFCK";
const VERSION: u16 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub n: u32,
    pub hash: u64,
    pub complete: bool,
    /// Index of the first segment not fully scanned.
    pub segment: usize,
    /// Next node to visit inside that segment; empty means its start.
    pub path: Vec<u16>,
    pub(crate) total: Tally,
    pub(crate) partial: Tally,
}

fn corrupt(msg: impl Into<String>) -> Error {
    Error::Checkpoint(msg.into())
}

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u16(&mut self, v: u16) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn path(&mut self, p: &[u16]) {
        self.u16(p.len() as u16);
        p.iter().for_each(|&x| self.u16(x));
    }
    fn opt_path(&mut self, p: Option<&Vec<u16>>) {
        match p {
            Some(p) => {
                self.u8(1);
                self.path(p);
            }
            None => self.u8(0),
        }
    }
    fn tally(&mut self, t: &Tally) {
        self.u64(t.visited);
        self.u64(t.feasible);
        self.opt_path(t.best.as_ref().map(|b| &b.1));
        if let Some((s, _)) = &t.best {
            self.u64(*s);
        }
        self.u32(t.counterexamples.len() as u32);
        t.counterexamples.iter().for_each(|c| self.path(c));
        self.u64(t.counterexample_count);
        self.opt_path(t.min_ratio.as_ref().map(|r| &r.2));
        if let Some((s, f, _)) = &t.min_ratio {
            self.u64(*s);
            self.u64(*f);
        }
        self.u64(t.equality_count);
    }
}

struct Reader<'a>(&'a [u8]);

impl Reader<'_> {
    fn take(&mut self, k: usize) -> Result<&[u8]> {
        if self.0.len() < k {
            return Err(corrupt("checkpoint is truncated"));
        }
        let (head, rest) = self.0.split_at(k);
        self.0 = rest;
        Ok(head)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn path(&mut self) -> Result<Vec<u16>> {
        let len = self.u16()?;
        (0..len).map(|_| self.u16()).collect()
    }
    fn opt_path(&mut self) -> Result<Option<Vec<u16>>> {
        match self.u8()? {
            0 => Ok(None),
            1 => Ok(Some(self.path()?)),
            t => Err(corrupt(format!("bad option tag {t}"))),
        }
    }
    fn tally(&mut self) -> Result<Tally> {
        let visited = self.u64()?;
        let feasible = self.u64()?;
        let best = match self.opt_path()? {
            Some(p) => Some((self.u64()?, p)),
            None => None,
        };
        let kept = self.u32()? as usize;
        if kept > super::MAX_KEPT_COUNTEREXAMPLES {
            return Err(corrupt("too many stored counterexamples"));
        }
        let counterexamples = (0..kept).map(|_| self.path()).collect::<Result<_>>()?;
        let counterexample_count = self.u64()?;
        let min_ratio = match self.opt_path()? {
            Some(p) => Some((self.u64()?, self.u64()?, p)),
            None => None,
        };
        let equality_count = self.u64()?;
        Ok(Tally { visited, feasible, best, counterexamples, counterexample_count, min_ratio, equality_count })
    }
}

impl Checkpoint {
    pub(crate) fn fresh(n: u32, hash: u64) -> Self {
        Checkpoint {
            n,
            hash,
            complete: false,
            segment: 0,
            path: Vec::new(),
            total: Tally::default(),
            partial: Tally::default(),
        }
    }

    /// Node visits recorded so far.
    pub fn visited(&self) -> u64 {
        self.total.visited + self.partial.visited
    }

    pub(crate) fn validate(&self, n: u32, hash: u64) -> Result<()> {
        if self.n != n {
            return Err(corrupt(format!("checkpoint is for n = {}, this search has n = {n}", self.n)));
        }
        if self.hash != hash {
            return Err(corrupt(format!(
                "checkpoint parameter hash {:016x} does not match this search ({hash:016x})",
                self.hash
            )));
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer(Vec::new());
        w.0.extend_from_slice(MAGIC);
        w.u16(VERSION);
        w.u8(self.n as u8);
        w.u64(self.hash);
        w.u8(self.complete as u8);
        w.u32(self.segment as u32);
        w.path(&self.path);
        w.tally(&self.total);
        w.tally(&self.partial);
        w.0
    }

    /// Parses a checkpoint; an empty input yields `None` (start fresh).
    pub fn from_bytes(bytes: &[u8]) -> Result<Option<Self>> {
        if bytes.is_empty() {
            return Ok(None);
        }
        let mut r = Reader(bytes);
        if r.take(4)? != MAGIC {
            return Err(corrupt("not a setfam checkpoint (bad magic)"));
        }
        let version = r.u16()?;
        if version != VERSION {
            return Err(corrupt(format!("unsupported checkpoint version {version}")));
        }
        let n = r.u8()? as u32;
        let hash = r.u64()?;
        let complete = match r.u8()? {
            0 => false,
            1 => true,
            t => return Err(corrupt(format!("bad completion flag {t}"))),
        };
        let segment = r.u32()? as usize;
        let path = r.path()?;
        let total = r.tally()?;
        let partial = r.tally()?;
        if !r.0.is_empty() {
            return Err(corrupt(format!("{} trailing bytes", r.0.len())));
        }
        Ok(Some(Checkpoint { n, hash, complete, segment, path, total, partial }))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        let io = |e: std::io::Error| corrupt(format!("writing {}: {e}", path.display()));
        let mut f = std::fs::File::create(&tmp).map_err(io)?;
        f.write_all(&self.to_bytes()).map_err(io)?;
        f.sync_all().map_err(io)?;
        std::fs::rename(&tmp, path).map_err(io)
    }

    /// Loads `path`; a missing or empty file yields `None`.
    pub fn load(path: &Path) -> Result<Option<Self>> {
        let mut buf = Vec::new();
        match std::fs::File::open(path) {
            Ok(mut f) => {
                f.read_to_end(&mut buf).map_err(|e| corrupt(format!("reading {}: {e}", path.display())))?;
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(corrupt(format!("reading {}: {e}", path.display()))),
        }
        Self::from_bytes(&buf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Checkpoint {
        let mut c = Checkpoint::fresh(6, 0xdead_beef);
        c.segment = 7;
        c.path = vec![3, 9, 40];
        c.total.visited = 100;
        c.total.best = Some((12, vec![1, 2]));
        c.total.counterexamples = vec![vec![5]];
        c.total.counterexample_count = 3;
        c.partial.min_ratio = Some((9, 4, vec![]));
        c
    }

    #[test]
    fn round_trip() {
        let c = sample();
        assert_eq!(Checkpoint::from_bytes(&c.to_bytes()).unwrap(), Some(c));
        assert_eq!(Checkpoint::from_bytes(&[]).unwrap(), None);
    }

    #[test]
    fn corrupt_inputs_rejected() {
        let bytes = sample().to_bytes();
        for cut in [3, 10, bytes.len() - 1] {
            assert!(Checkpoint::from_bytes(&bytes[..cut]).is_err());
        }
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(Checkpoint::from_bytes(&bad).is_err());
        let mut extra = bytes;
        extra.push(0);
        assert!(Checkpoint::from_bytes(&extra).is_err());
    }

    #[test]
    fn mismatches_rejected() {
        let c = sample();
        assert!(c.validate(6, 0xdead_beef).is_ok());
        assert!(c.validate(5, 0xdead_beef).is_err());
        assert!(c.validate(6, 1).is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.ck");
        assert_eq!(Checkpoint::load(&p).unwrap(), None);
        sample().save(&p).unwrap();
        assert_eq!(Checkpoint::load(&p).unwrap(), Some(sample()));
    }
}
