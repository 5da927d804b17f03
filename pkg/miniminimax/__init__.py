# -*- coding: utf-8 -*-

#            _       _           _       _
#  _ __ ___ (_)_ __ (_)_ __ ___ (_)_ __ (_)_ __ ___   __ ___  __
# | '_ ` _ \| | '_ \| | '_ ` _ \| | '_ \| | '_ ` _ \ / _` \ \/ /
# | | | | | | | | | | | | | | | | | | | | | | | | | | (_| |>  <
# |_| |_| |_|_|_| |_|_|_| |_| |_|_|_| |_|_|_| |_| |_|\__,_/_/\_\

""" best-case uncertainty bounds for any emulator of a partially observed Lipschitz function. """
