import logging

from ..enumeration import verify_certificate
from ..errors import VerificationFailed
from ..io import load_certificates
from . import print_table, register_command, require

logger = logging.getLogger(__name__)


@register_command("verify")
def cmd_verify(config) -> int:
    """Replay every certificate of a sidecar against the lattice stored with it."""
    path = require(config.certificates_path, "--certificates", "verify")
    lattice, certificates = load_certificates(path, config.precision_bits)
    enumeration = config.enumeration_config()
    rows, failed = [], []
    for label, certificate in certificates:
        ok = verify_certificate(lattice, certificate, enumeration)
        rows.append([label, certificate.verdict.value, "ok" if ok else "FAILED"])
        if not ok:
            failed.append(label)
    print_table(["label", "verdict", "replay"], rows)
    if failed:
        raise VerificationFailed(f"{len(failed)} of {len(certificates)} certificates do not replay: {failed}")
    logger.info("all %d certificates replay", len(certificates))
    return 0
