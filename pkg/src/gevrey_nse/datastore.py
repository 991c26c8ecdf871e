"""
Stores all data needed and shared by app modules
"""
import gevrey_nse

VERSION = gevrey_nse.__version__

# environment variable capping internal parallelism
THREADS_ENV_VAR = "GEVREY_NSE_THREADS"

# process exit codes
EXIT_OK = 0
EXIT_CONFIGURATION = 1
EXIT_NUMERICAL_ABORT = 2
EXIT_NONCONVERGENCE = 3
EXIT_VERIFICATION_FAILED = 4

# relative slack used by every inequality report
INEQUALITY_SLACK = 1e-12
APPENDIX_SLACK = 1e-10
