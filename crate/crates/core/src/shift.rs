use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::Result;
use crate::substrate::{self, Language, Params};

/// The subshift `X_w` for one validated parameter set, with caches for the
/// objects every block-map computation keeps asking for.
///
/// Caches are filled on first use and never invalidated; everything cached
/// is a pure function of the parameters.
#[derive(Debug)]
pub struct ToeplitzShift {
    params: Params,
    languages: Mutex<HashMap<usize, Arc<Language>>>,
    skeletons: Mutex<HashMap<u32, Arc<Vec<u8>>>>,
    pub(crate) detection: Mutex<HashMap<u32, usize>>,
    pub(crate) sigmas: Mutex<HashMap<(usize, bool), crate::blockmap::Rule>>,
}

impl ToeplitzShift {
    pub fn new(params: Params) -> Self {
        ToeplitzShift {
            params,
            languages: Mutex::default(),
            skeletons: Mutex::default(),
            detection: Mutex::default(),
            sigmas: Mutex::default(),
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// Length-`len` factors, cached.
    pub fn language(&self, len: usize) -> Result<Arc<Language>> {
        if let Some(l) = self.languages.lock().unwrap().get(&len) {
            return Ok(Arc::clone(l));
        }
        let lang = Arc::new(substrate::language(&self.params, len)?);
        let mut cache = self.languages.lock().unwrap();
        Ok(Arc::clone(cache.entry(len).or_insert(lang)))
    }

    /// One period of `Sk(p^level, x(w))` as bytes over `{0,1,_}`.
    pub fn skeleton(&self, level: u32) -> Result<Arc<Vec<u8>>> {
        if let Some(s) = self.skeletons.lock().unwrap().get(&level) {
            return Ok(Arc::clone(s));
        }
        let period = substrate::period_of_approximation(&self.params, level)?;
        let bytes = Arc::new(period.to_bytes());
        let mut cache = self.skeletons.lock().unwrap();
        Ok(Arc::clone(cache.entry(level).or_insert(bytes)))
    }
}

impl Default for ToeplitzShift {
    fn default() -> Self {
        ToeplitzShift::new(Params::default())
    }
}
