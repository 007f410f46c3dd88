"""
Пакет защищённых ремонтопригодных фонтанных кодов (SRFC).

Содержит:
- Field: арифметика GF(q^p) и линейная алгебра над ним
- Linearized/Gabidulin: линеаризованные многочлены и MRD-коды
- RFC: систематические коды с локальным восстановлением
- Secure: конкатенация Габидулин + RFC и модель хранилища
- Eavesdropper/Oracle: аудит утечки к (ℓ1, ℓ2)-перехватчику
- Rates: достижимые защищённые скорости
- Storage/Pipeline: файлы описания, шарды, кодирование файлов
"""

__version__ = "1.0.0"

from .errors import SrfcError
from .field import FieldElement, FieldParams, make_field
from .gabidulin import GabidulinCode, gab_new
from .rfc import FixedGroupPolicy, LowestParityPolicy, RfcCode, rfc_generate
from .secure import DssState, SecureRfcSystem, srfc_build, srfc_decode, srfc_encode
from .eavesdropper import AttackSpec, SecurityReport, audit, audit_attack, simulate_attack, worst_case_audit
from .oracle import mi_oracle
from .pipeline import StoragePipeline

__all__ = [
    "SrfcError",
    "FieldElement",
    "FieldParams",
    "make_field",
    "GabidulinCode",
    "gab_new",
    "RfcCode",
    "rfc_generate",
    "LowestParityPolicy",
    "FixedGroupPolicy",
    "SecureRfcSystem",
    "srfc_build",
    "srfc_encode",
    "srfc_decode",
    "DssState",
    "AttackSpec",
    "SecurityReport",
    "simulate_attack",
    "audit",
    "audit_attack",
    "worst_case_audit",
    "mi_oracle",
    "StoragePipeline",
]
