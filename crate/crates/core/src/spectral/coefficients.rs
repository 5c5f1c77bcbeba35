//! Eigenvalue-grouped expansion of the amplitude at the starting site.
//!
//! For a walker started at the origin with spinor `s`, the amplitude there is
//!
//! ```text
//! ψ_S(0, 0, t) = N⁻² Σ_λ C_λ[S] λᵗ,     C_λ = Σ_{(n,m,k): λ_{n,m,k} = λ} v_{n,m,k} v_{n,m,k}† s,
//! ```
//!
//! with one term per distinct eigenvalue `λ`. For the Grover coin the
//! non-trivial terms can also be organized by momentum orbit, which is what
//! [`grover_class_table`] does.

use num_complex::Complex64;

use super::grover::{class_representatives, degeneracy_class, OrbitKind};
use super::{BlockVector, SpectralDecomposition, CLUSTER_TOL};
use crate::coin::{Chirality, Coin};
use crate::error::Result;
use crate::state::{InitialSpec, Spinor};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn projected(v: &BlockVector, s: &Spinor) -> Spinor {
    let overlap: Complex64 = (0..4).map(|j| v[j].conj() * s[j]).sum();
    [v[0] * overlap, v[1] * overlap, v[2] * overlap, v[3] * overlap]
}

fn add(acc: &mut Spinor, x: &Spinor) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += b;
    }
}

/// One eigenvalue's contribution.
#[derive(Debug, Clone)]
pub struct ExpansionTerm {
    pub value: Complex64,
    pub multiplicity: usize,
    /// Unnormalized coefficient `C_λ` per chirality.
    pub coefficient: Spinor,
}

#[derive(Debug, Clone)]
pub struct OriginExpansion {
    size: usize,
    terms: Vec<ExpansionTerm>,
}

/// Coefficients for every eigenvalue cluster of `coin` on the `N × N` torus.
pub fn origin_coefficients(coin: &Coin, initial: &InitialSpec, size: usize) -> Result<OriginExpansion> {
    let decomp = SpectralDecomposition::numeric(coin, size)?;
    Ok(OriginExpansion::new(&decomp, initial))
}

impl OriginExpansion {
    pub fn new(decomp: &SpectralDecomposition, initial: &InitialSpec) -> Self {
        let s = initial.weights();
        let terms = decomp
            .clusters()
            .iter()
            .map(|c| {
                let mut coefficient = [ZERO; 4];
                for &(n, m, k) in &c.members {
                    add(&mut coefficient, &projected(&decomp.block(n, m).eigenvectors[k], s));
                }
                ExpansionTerm { value: c.value, multiplicity: c.multiplicity(), coefficient }
            })
            .collect();
        OriginExpansion { size: decomp.size(), terms }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn terms(&self) -> &[ExpansionTerm] {
        &self.terms
    }

    pub fn term_near(&self, value: Complex64) -> Option<&ExpansionTerm> {
        self.terms.iter().find(|t| (t.value - value).norm() < CLUSTER_TOL)
    }

    /// `C₁`: the coefficient of the eigenvalue +1 (zero if absent).
    pub fn plus_one(&self) -> Spinor {
        self.term_near(Complex64::new(1.0, 0.0)).map_or([ZERO; 4], |t| t.coefficient)
    }

    /// `C₋₁`: the coefficient of the eigenvalue −1 (zero if absent).
    pub fn minus_one(&self) -> Spinor {
        self.term_near(Complex64::new(-1.0, 0.0)).map_or([ZERO; 4], |t| t.coefficient)
    }

    /// Amplitude at the origin after `t` steps.
    pub fn amplitude(&self, t: u64) -> Spinor {
        let mut out = [ZERO; 4];
        for term in &self.terms {
            let p = term.value.powu(t as u32);
            for s in 0..4 {
                out[s] += term.coefficient[s] * p;
            }
        }
        let scale = 1.0 / (self.size * self.size) as f64;
        out.map(|z| z * scale)
    }
}

/// Coefficients `c_k` of one Grover orbit: the projections onto eigenvalue
/// `λ_k` of the representative, summed over the orbit's members.
#[derive(Debug, Clone)]
pub struct ClassCoefficient {
    pub representative: (usize, usize),
    pub kind: Option<OrbitKind>,
    pub eigenvalues: [Complex64; 4],
    pub c: [Spinor; 4],
}

impl ClassCoefficient {
    pub fn get(&self, k: usize, s: Chirality) -> Complex64 {
        self.c[k][s.index()]
    }
}

/// Orbit-organized expansion for the Grover coin. Entry 0 is the lone
/// `(0, 0)` block; the rest follow [`class_representatives`].
#[derive(Debug, Clone)]
pub struct GroverClassTable {
    pub size: usize,
    pub classes: Vec<ClassCoefficient>,
}

impl GroverClassTable {
    pub fn class(&self, n: usize, m: usize) -> Option<&ClassCoefficient> {
        self.classes.iter().find(|c| c.representative == (n, m))
    }

    /// `C₁ = c_{0,0,+1} + Σ_classes c_{+1}`.
    pub fn plus_one(&self) -> Spinor {
        let mut acc = [ZERO; 4];
        for c in &self.classes {
            add(&mut acc, &c.c[1]);
        }
        acc
    }

    /// `C₋₁ = c_{0,0,−1} + c_{0,0,3} + c_{0,0,4} + Σ_classes c_{−1}`.
    pub fn minus_one(&self) -> Spinor {
        let mut acc = [ZERO; 4];
        for c in &self.classes {
            add(&mut acc, &c.c[0]);
            if c.representative == (0, 0) {
                add(&mut acc, &c.c[2]);
                add(&mut acc, &c.c[3]);
            }
        }
        acc
    }
}

/// Grover-coin orbit coefficients from the closed-form eigenpairs.
pub fn grover_class_table(initial: &InitialSpec, size: usize) -> Result<GroverClassTable> {
    let decomp = SpectralDecomposition::grover_closed_form(size)?;
    let s = initial.weights();
    let zero = decomp.block(0, 0);
    let mut classes = vec![ClassCoefficient {
        representative: (0, 0),
        kind: None,
        eigenvalues: zero.eigenvalues,
        c: [0, 1, 2, 3].map(|k| projected(&zero.eigenvectors[k], s)),
    }];
    for (n, m) in class_representatives(size) {
        let class = degeneracy_class(n, m, size)?;
        let eigenvalues = decomp.block(n, m).eigenvalues;
        let mut c = [[ZERO; 4]; 4];
        for &(a, b) in &class.members {
            let blk = decomp.block(a, b);
            for (k, ck) in c.iter_mut().enumerate() {
                // members may list the shared eigenvalues in either order
                for j in 0..4 {
                    if (blk.eigenvalues[j] - eigenvalues[k]).norm() < CLUSTER_TOL {
                        add(ck, &projected(&blk.eigenvectors[j], s));
                    }
                }
            }
        }
        classes.push(ClassCoefficient { representative: (n, m), kind: Some(class.kind), eigenvalues, c });
    }
    Ok(GroverClassTable { size, classes })
}
