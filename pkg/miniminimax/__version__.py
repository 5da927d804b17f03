#            _       _           _       _
#  _ __ ___ (_)_ __ (_)_ __ ___ (_)_ __ (_)_ __ ___   __ ___  __
# | '_ ` _ \| | '_ \| | '_ ` _ \| | '_ \| | '_ ` _ \ / _` \ \/ /
# | | | | | | | | | | | | | | | | | | | | | | | | | | (_| |>  <
# |_| |_| |_|_|_| |_|_|_| |_| |_|_|_| |_|_|_| |_| |_|\__,_/_/\_\

""" version information for miniminimax """

__title__ = "miniminimax"
__description__ = "mini-minimax uncertainty bounds for emulators of black-box functions"
__url__ = "https://github.com/miniminimax/miniminimax"
__author__ = "miniminimax developers"
__author_email__ = "miniminimax@users.noreply.github.com"
__version__ = "0.1.0"
__status__ = "alpha"
__license__ = "BSD-3-Clause"
