"""hopfq: exact-arithmetic (de)quantization of (co)Poisson Hopf algebras
at finite hbar-order and finite PBW degree.

Subpackage map:

* ``truncmod``   scalars Q[h]/(h^N), filtered modules and maps
* ``freealg``    free series, Lyndon bases, Drinfeld-Kohno algebras
* ``associator`` rational Drinfeld associators and the GT semigroup
* ``liebialg``   Lie bialgebras, Drinfeld-Yetter modules, Cartier data
* ``hopfcore``   truncated Hopf / (co)Poisson data with axiom verifiers
* ``quantize``   the Q-/D- pipelines, module transport, round trips
* ``coenv``      universal enveloping coalgebras and PBW*
* ``braces``     Hochschild braces and the Tamarkin dg-bialgebra
* ``cli``        command line front end
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as kernel_backend  # noqa: F401
