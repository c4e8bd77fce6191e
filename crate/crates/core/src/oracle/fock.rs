//! Operators on the truncated atom ⊗ field space.
//!
//! Basis index `atom · (n_max + 1) + n` with `atom = 0` for `|e⟩` and
//! `atom = 1` for `|g⟩`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::SystemParams;

pub const MIN_FOCK_CUTOFF: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    Excited,
    Ground,
}

impl Atom {
    fn offset(self) -> usize {
        match self {
            Atom::Excited => 0,
            Atom::Ground => 1,
        }
    }

    fn label(self) -> char {
        match self {
            Atom::Excited => 'e',
            Atom::Ground => 'g',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockOperators {
    pub n_max: usize,
    pub a: DMatrix<Complex64>,
    pub adag: DMatrix<Complex64>,
    pub sigma_plus: DMatrix<Complex64>,
    pub sigma_minus: DMatrix<Complex64>,
    pub sigma_z: DMatrix<Complex64>,
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl FockOperators {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < MIN_FOCK_CUTOFF {
            return Err(Error::InvalidParams(format!(
                "Fock cutoff must be at least {MIN_FOCK_CUTOFF}, got {n_max}"
            )));
        }
        let nf = n_max + 1;
        let field_id = DMatrix::<Complex64>::identity(nf, nf);
        let atom_id = DMatrix::<Complex64>::identity(2, 2);
        let mut a_field = DMatrix::<Complex64>::zeros(nf, nf);
        for n in 1..nf {
            a_field[(n - 1, n)] = c((n as f64).sqrt());
        }
        let adag_field = a_field.adjoint();
        // atom basis (e, g): σ⁺ = |e⟩⟨g|
        let mut sp = DMatrix::<Complex64>::zeros(2, 2);
        sp[(0, 1)] = c(1.0);
        let sm = sp.adjoint();
        let sz = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(-1.0)]));
        Ok(FockOperators {
            n_max,
            a: atom_id.kronecker(&a_field),
            adag: atom_id.kronecker(&adag_field),
            sigma_plus: sp.kronecker(&field_id),
            sigma_minus: sm.kronecker(&field_id),
            sigma_z: sz.kronecker(&field_id),
        })
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }

    pub fn index(&self, atom: Atom, n: usize) -> usize {
        atom.offset() * (self.n_max + 1) + n
    }

    pub fn label(&self, index: usize) -> String {
        let nf = self.n_max + 1;
        let atom = if index < nf {
            Atom::Excited
        } else {
            Atom::Ground
        };
        format!("|{},{}⟩", atom.label(), index % nf)
    }

    pub fn number(&self) -> DMatrix<Complex64> {
        &self.adag * &self.a
    }

    /// `σ⁺σ⁻ + a†a`, conserved by the full Hamiltonian.
    pub fn excitation_number(&self) -> DMatrix<Complex64> {
        &self.sigma_plus * &self.sigma_minus + self.number()
    }
}

/// `ωσ_z/2 + ν a†a + g(aσ⁺ + a†σ⁻) + χ a†²a² - iκ/2 a†a - iΓ/2 σ⁺σ⁻`.
pub fn build_full_hamiltonian(params: &SystemParams, n_max: usize) -> Result<DMatrix<Complex64>> {
    let (Some(omega), Some(nu)) = (params.omega, params.nu) else {
        return Err(Error::MissingAbsoluteFrequencies);
    };
    params.validate()?;
    let ops = FockOperators::new(n_max)?;
    let number = ops.number();
    let excited = &ops.sigma_plus * &ops.sigma_minus;
    let kerr = &ops.adag * &ops.adag * &ops.a * &ops.a;
    let jc = &ops.a * &ops.sigma_plus + &ops.adag * &ops.sigma_minus;
    let i = Complex64::i();
    Ok(
        &ops.sigma_z * c(0.5 * omega) + &number * c(nu) + jc * c(params.g) + kerr * c(params.chi)
            - &number * (i * 0.5 * params.kappa)
            - excited * (i * 0.5 * params.gamma_a),
    )
}
