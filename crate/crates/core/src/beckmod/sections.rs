use super::{square_zero_extension, BeckModule};
use crate::error::{Error, Result};
use crate::sampling::{sweep, Sampling};

pub const DEFAULT_SECTION_CAP: u64 = 729;

/// Sections `s(a) = (a, D(a))` of `A ⊕_p M → A` found by exhaustive search.
#[derive(Debug, Clone)]
pub struct SectionSearch {
    pub candidates: u64,
    /// Each section as the list of `D(e_i)` for every basis index of A.
    pub sections: Vec<Vec<Vec<u64>>>,
}

impl SectionSearch {
    pub fn count(&self) -> usize {
        self.sections.len()
    }
}

/// Enumerates every k-linear `s: A → A ⊕_p M` with `pr_A ∘ s = id` and
/// `s(1) = (1, 0)`, keeping those that are multiplicative on basis pairs and
/// commute with π on every element of A_+ (on its basis when A_+ is too large).
pub fn section_homs_bruteforce(m: &BeckModule, cap: u64) -> Result<SectionSearch> {
    let pd = m.algebra();
    let a = pd.algebra();
    let f = a.field();
    let d = a.dim();
    let md = m.dim();
    let free = d.saturating_sub(1);
    let candidates = f.p().checked_pow((md * free) as u32).unwrap_or(u64::MAX);
    if candidates > cap {
        return Err(Error::CapExceeded { size: candidates, cap });
    }
    let ext = square_zero_extension(m)?;
    let e = ext.algebra.algebra();
    let n = e.dim();

    let plus_elems: Vec<Vec<u64>> = if a.plus_subspace().cardinality() <= DEFAULT_SECTION_CAP {
        let mut v = Vec::new();
        let all = Sampling::default().with_cap(u64::MAX);
        sweep(f, d, &a.plus_basis(), &all, 0, |x| {
            v.push(x.to_vec());
            true
        });
        v
    } else {
        a.plus_basis()
    };

    let mut sections = Vec::new();
    let axes: Vec<Vec<u64>> = (0..md * free).map(|i| crate::exactlin::unit_vec(md * free, i)).collect();
    let all = Sampling::default().with_cap(u64::MAX);
    sweep(f, md * free, &axes, &all, 0, |flat| {
        let mut images: Vec<Vec<u64>> = vec![vec![0; md]];
        images.extend((0..free).map(|i| flat[i * md..(i + 1) * md].to_vec()));
        let s = |x: &[u64]| -> Vec<u64> {
            let mut v = vec![0; n];
            v[..d].copy_from_slice(x);
            for (i, &c) in x.iter().enumerate() {
                if c != 0 {
                    f.axpy(&mut v[d..], c, &images[i]);
                }
            }
            v
        };
        let basis_images: Vec<Vec<u64>> = (0..d).map(|i| s(&a.basis_vec(i))).collect();
        for i in 0..d {
            for j in i..d {
                if e.mul(&basis_images[i], &basis_images[j]) != s(&a.basis_product_vec(i, j)) {
                    return true;
                }
            }
        }
        for x in &plus_elems {
            if ext.algebra.pi_unchecked(&s(x)) != s(&pd.pi_unchecked(x)) {
                return true;
            }
        }
        sections.push(images);
        true
    });
    Ok(SectionSearch { candidates, sections })
}
