#!/usr/bin/env python3
"""Regenerate the FCIDUMP fixtures and their metadata sidecars.

Requires PySCF. Run from the repository root:

    python3 fixtures/generate.py
"""
import json
import os

import pyscf
from pyscf import gto, mcscf, scf
from pyscf.tools import fcidump

HERE = os.path.dirname(os.path.abspath(__file__))

FIXTURES = [
    # (directory, basis, geometry, charge, spin, n_frozen, note)
    ("h2", "sto-3g", "H 0 0 0; H 0 0 0.74", 0, 0, 0, "equilibrium bond length 0.74 A"),
    ("h2", "6-31g", "H 0 0 0; H 0 0 0.74", 0, 0, 0, "equilibrium bond length 0.74 A"),
    ("h2o", "sto-6g", "O 0 0 0; H 0.757 0.586 0; H -0.757 0.586 0", 0, 0, 1, "equilibrium geometry"),
    ("oh_minus", "sto-6g", "O 0 0 0; H 0 0 0.95", -1, 0, 1, "bond length 0.95 A"),
    ("h3o_plus", "sto-6g",
     "O 0 0 0.1; H 0 0.9377 -0.2166; H 0.8121 -0.4689 -0.2166; H -0.8121 -0.4689 -0.2166",
     1, 0, 1, "pyramidal C3v"),
    ("hcn", "sto-6g", "H 0 0 -1.0640; C 0 0 0; N 0 0 1.1560", 0, 0, 2, "linear equilibrium"),
    ("h2o", "6-31g", "O 0 0 0; H 0.757 0.586 0; H -0.757 0.586 0", 0, 0, 1, "equilibrium geometry"),
]


def main():
    for name, basis, geom, charge, spin, n_frozen, note in FIXTURES:
        mol = gto.M(atom=geom, basis=basis, charge=charge, spin=spin,
                    symmetry=True, unit="Angstrom", verbose=0)
        mf = scf.RHF(mol)
        mf.conv_tol = 1e-12
        mf.kernel()
        assert mf.converged, name
        n_active = mol.nao - n_frozen
        n_active_elec = mol.nelectron - 2 * n_frozen
        cas = mcscf.CASCI(mf, n_active, n_active_elec)
        cas.verbose = 0
        e_cas = cas.kernel()[0]

        out_dir = os.path.join(HERE, name)
        os.makedirs(out_dir, exist_ok=True)
        stem = os.path.join(out_dir, basis.upper().replace("-", "-"))
        fcidump.from_scf(mf, stem + ".fcidump", tol=1e-12)
        meta = {
            "molecule": name,
            "label": name.replace("_minus", "-").replace("_plus", "+"),
            "basis": basis.upper(),
            "generator": f"PySCF {pyscf.__version__} RHF (symmetry-adapted canonical orbitals)",
            "geometry_angstrom": geom,
            "charge": charge,
            "ms2": spin,
            "n_electrons": mol.nelectron,
            "n_spatial": mol.nao,
            "hf_energy": mf.e_tot,
            "n_frozen": n_frozen,
            "active_fci_energy": e_cas,
            "note": note,
        }
        with open(stem + ".json", "w") as fh:
            json.dump(meta, fh, indent=2)
            fh.write("\n")
        print(f"{name}/{basis}: E_HF={mf.e_tot:.10f} E_CAS={e_cas:.10f} "
              f"active={n_active}o/{n_active_elec}e")


if __name__ == "__main__":
    main()
